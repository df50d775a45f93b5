"""Exception types raised across the package."""


class FovlapError(Exception):
    pass


class DegenerateLookAt(FovlapError, ValueError):
    pass


class NonUnitAxis(FovlapError, ValueError):
    pass


class PixelOutOfBounds(FovlapError, ValueError):
    pass


class EmptySetup(FovlapError, ValueError):
    pass


class AnchorMiss(FovlapError):
    """The anchor camera's frustum did not hit the reference surface."""


class EmptyEnsemble(FovlapError, ValueError):
    pass


class ConfigParse(FovlapError):
    pass


class ConfigInvalid(FovlapError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
