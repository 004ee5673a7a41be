from context_pyramid.logging import get_logger


class ContextPyramidError(Exception):
    """
    Parent class for all ContextPyramid exceptions.

    This class is not intended to be instantiated directly. Developers should use one of the subclasses instead.
    """

    def __init__(self, message: str | bytes):
        super().__init__(message)

        # Log exception message as an error
        logger = get_logger()
        message_str = message if isinstance(message, str) else message.decode("utf-8")
        # Replace line breaks with escape code
        logger.error(message_str.replace("\n", r"\n"))


class ContextPyramidConfigError(ContextPyramidError):
    """
    Exception class for handling errors related to configuration files.

    Examples include missing configuration files, unparseable lines or unknown keys.
    """

    pass


class ContextPyramidGradientError(ContextPyramidError):
    """
    Exception class for handling errors when checking gradients.

    For example, when an op has no registered backward pass.
    """

    pass


class ContextPyramidInputOutputError(ContextPyramidError):
    """
    Exception class for handling errors when reading or writing artefact files.

    For example, a PGM image or tensor dump with a malformed header.
    """

    pass


class ContextPyramidShapeError(ContextPyramidError):
    """
    Exception class for handling tensor shape errors.

    Raise this error when channel, spatial or batch dimensions disagree, or when a
    convolution would produce a negative output size.
    """

    pass


class ContextPyramidTypeError(ContextPyramidError):
    """
    Exception class for handling errors related to type checking.

    For example, when a tensor has the wrong rank or a configuration field the wrong type.
    """

    pass


class ContextPyramidValueError(ContextPyramidError):
    """
    Exception class for handling errors related to value checking.

    For example, when a function is called with an argument of the wrong value.
    """

    pass
