"""Exception types shared by the library and mapped to CLI exit codes."""


class UsageError(ValueError):
    """A precondition on arguments was violated (CLI exit code 2)."""


class ResourceError(RuntimeError):
    """A configured cell or materialization cap would be exceeded (CLI exit code 3)."""
