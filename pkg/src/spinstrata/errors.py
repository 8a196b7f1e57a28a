"""Exception types shared by every module; the CLI maps them to exit code 2."""


class SpinStrataError(Exception):
    kind = "error"

    def to_json(self):
        return {"error": self.kind, "message": str(self)}


class InvalidInput(SpinStrataError, ValueError):
    kind = "invalid-input"


class ConstructionError(SpinStrataError):
    kind = "construction"

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail

    def to_json(self):
        out = super().to_json()
        if self.detail is not None:
            out["detail"] = self.detail
        return out


class UnsupportedCase(SpinStrataError):
    kind = "unsupported-case"


class CapExceeded(SpinStrataError):
    kind = "cap-exceeded"
