"""Parameter sweeps over APE, anchor footprint, Q or the overlap threshold."""
from dataclasses import dataclass, field, replace

from .config import with_ape, with_footprint, with_threshold
from .errors import FovlapError
from .formation import build_scenario
from .graph import p_calib
from .montecarlo import run_ensemble

AXIS_COLUMN = {"ape": "ape_deg", "fov": "fov_km", "q": "q", "t": "t_threshold"}


@dataclass
class ResultRow:
    axis: str
    value: object
    mean_ao: float
    mean_ro: float
    std_ro: float
    p_calib: dict = field(default_factory=dict)
    miss_count: int = 0
    n_mc: int = 0
    seed: int = 0


class SweepError(FovlapError):
    def __init__(self, axis, value, cause):
        super().__init__(f"sweep {axis}={value!r} failed: {cause}")
        self.value = value


def _row(axis, value, stats, criteria, qs, seed):
    hist = stats.select_histogram(criteria)
    return ResultRow(axis, value, stats.mean_ao, stats.mean_ro, stats.std_ro,
                     {q: p_calib(hist, q) for q in qs}, stats.miss_count,
                     stats.n_mc, seed)


def run_sweep(formation, ensemble, sweep, workers=1):
    """One ResultRow per swept value.

    Row ``i`` draws its samples from the stream ``(master_seed, i)``. A Q
    sweep reuses a single ensemble (stream index 0), so its P_calib column
    is an exact tail sum over one histogram.
    """
    seed = ensemble.master_seed
    if sweep.axis == "q":
        scenario = build_scenario(formation)
        stats = run_ensemble(scenario, replace(ensemble, stream_key=(0,)), workers)
        return [_row("q", q, stats, ensemble.criteria, (q,), seed) for q in sweep.values]

    rows = []
    for i, value in enumerate(sweep.values):
        form, ens = formation, replace(ensemble, stream_key=(i,))
        try:
            if sweep.axis == "ape":
                ens = with_ape(ens, value)
            elif sweep.axis == "t":
                ens = with_threshold(ens, value)
            elif sweep.axis == "fov":
                form = with_footprint(form, *value)
            stats = run_ensemble(build_scenario(form), ens, workers)
        except (FovlapError, ValueError) as exc:
            raise SweepError(sweep.axis, value, exc) from exc
        rows.append(_row(sweep.axis, value, stats, ens.criteria, sweep.q_values, seed))
    return rows
