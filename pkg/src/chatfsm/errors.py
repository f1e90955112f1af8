"""Exception types shared across the toolkit."""


class ChatFsmError(Exception):
    """Base class for all toolkit errors."""


class FsmParseError(ChatFsmError):
    """Raised when FSM JSON text cannot be decoded.

    Carries the 1-based line/column of the offending byte when known.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class FsmSchemaError(ChatFsmError):
    """Raised when decoded JSON does not follow the FSM interchange schema."""

    def __init__(self, message: str, path: str):
        self.path = path
        super().__init__(f"{message} at {path}")


class FsmValidationError(ChatFsmError):
    """Raised when an operation refuses a document that fails validation."""

    def __init__(self, report):
        self.report = report
        lines = "; ".join(issue.message for issue in report.errors())
        super().__init__(f"document is not valid: {lines}")


class GatewayError(ChatFsmError):
    """Base class for chat-completion gateway failures."""


class TransportError(GatewayError):
    """Network-level failure talking to the provider."""


class GatewayTimeoutError(TransportError):
    """The provider did not answer within the configured timeout."""


class AuthenticationError(GatewayError):
    """The provider rejected the credentials."""


class MalformedResponseError(GatewayError):
    """The provider answered with a payload we cannot interpret."""


class CassetteMissError(GatewayError):
    """Replay mode was asked for a request that was never recorded."""

    def __init__(self, digest: str):
        self.digest = digest
        super().__init__(f"no cassette entry for request digest {digest}")


class EmptyReplyError(GatewayError):
    """The model returned an empty reply where content was required."""
