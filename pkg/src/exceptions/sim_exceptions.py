class SimException(Exception):
    exit_code = 2
    detail = "Simulation error"

    def __init__(self, detail: str | None = None) -> None:
        if detail is not None:
            self.detail = detail
        super().__init__(self.detail)

    def __str__(self):
        return f"{self.detail}"


class ConfigException(SimException):
    exit_code = 1
    detail = "Invalid configuration"


class DomainException(SimException):
    detail = "Argument outside the model domain"


class FitException(SimException):
    exit_code = 1
    detail = "Rank-deficient regression design"


class BoundsException(SimException):
    detail = "Query outside terrain grid"


class NumericException(SimException):
    detail = "Non-finite contact state"


class AnalysisException(SimException):
    detail = "No steady-state samples to analyse"


class FormatException(SimException):
    detail = "Malformed grid or run-log file"
