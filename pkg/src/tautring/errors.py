class UsageError(ValueError):
    """Raised when an operation is called outside its domain.

    The CLI maps this to exit status 2.
    """
