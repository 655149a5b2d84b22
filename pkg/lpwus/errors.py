class LpWusError(Exception):
    pass


class ConfigError(LpWusError, ValueError):
    """Invalid or unparsable configuration.

    ``field`` names the offending field path (``lp_wus.M``) and ``line`` the
    1-based line in the source document when it is known.
    """

    def __init__(self, message: str, field: str = None, line: int = None):
        self.field = field
        self.line = line
        where = []
        if field:
            where.append(f"field '{field}'")
        if line:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class UnsupportedConfigurationError(LpWusError, ValueError):
    pass


class ScheduleError(LpWusError):
    pass


class MoSkippedError(ScheduleError):
    def __init__(self, mo_index: int, available: int, required: int):
        self.mo_index = mo_index
        self.available = available
        self.required = required
        super().__init__(
            f"MO {mo_index} skipped: {available} usable symbols, {required} required"
        )


class CalibrationError(LpWusError, ValueError):
    pass
