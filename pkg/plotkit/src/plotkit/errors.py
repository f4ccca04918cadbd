class PlotkitError(Exception):
    """Base class for rendering errors."""


class MissingColumnError(PlotkitError):
    def __init__(self, path, missing):
        super().__init__(f"{path}: missing required columns {sorted(missing)}")
        self.path = path
        self.missing = tuple(sorted(missing))


class EmptyInputError(PlotkitError):
    def __init__(self, path):
        super().__init__(f"{path}: no data rows")
        self.path = path
