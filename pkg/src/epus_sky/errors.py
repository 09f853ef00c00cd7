class EpusError(Exception):
    pass


class UsageError(EpusError, ValueError):
    """A call violated a precondition (dimension mismatch, duplicate id, ...)."""


class ConfigError(EpusError, ValueError):
    pass


class ProtocolError(EpusError, RuntimeError):
    """Edge/server message flow reached a state the protocol forbids."""


class DecodeError(EpusError, ValueError):
    def __init__(self, msg: str, offset: int):
        super().__init__(f"{msg} (at byte {offset})")
        self.offset = offset
