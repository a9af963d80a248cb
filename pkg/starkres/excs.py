import pprint
import logging

logger = logging.getLogger(__name__)


class StarkError(Exception):
    """
    Base error class for every error raised by starkres
    """

    def _build_super_msg(self, msg, **context):
        context = {k: v for k, v in context.items() if v is not None}
        if not context:
            return msg
        return "\nError msg: {}\nContext: {}".format(msg, pprint.pformat(context))


class DomainError(StarkError):
    """ Raised when an argument lies outside the domain of an operation: a branch point, a non-finite input or an empty region

    Attributes:

        msg (str): Error msg

        value: The offending argument
    """

    def __init__(self, msg, value=None):
        self.msg = msg
        self.value = value
        super_msg = self._build_super_msg(msg, value=value)
        logger.error(super_msg)
        super(DomainError, self).__init__(super_msg)


class BoundaryZeroError(DomainError):
    """ Raised when the function being tracked vanishes (numerically) on a contour

    Attributes:

        point (complex): boundary point where ``|f|`` fell under the threshold

        suggested_shift (complex): perturbation of the region that avoids the zero
    """

    def __init__(self, msg, point=None, suggested_shift=None):
        self.point = point
        self.suggested_shift = suggested_shift
        super(BoundaryZeroError, self).__init__(
            "{} (suggested region shift: {})".format(msg, suggested_shift), value=point
        )


class ConfigError(StarkError):
    """ Raised at parse time when a configuration is invalid

    Attributes:

        msg (str): Error msg

        fields (dict): maps a dotted field path to the reason it was rejected
    """

    def __init__(self, msg, fields=None):
        self.msg = msg
        self.fields = fields or {}
        super_msg = self._build_super_msg(msg, fields=self.fields or None)
        logger.error(super_msg)
        super(ConfigError, self).__init__(super_msg)


class AccuracyError(StarkError):
    """ Raised when a quadrature or special function evaluation can not reach the requested accuracy

    Attributes:

        achieved (float): the accuracy estimate that was reached

        requested (float): the accuracy that was asked for
    """

    def __init__(self, msg, achieved=None, requested=None):
        self.msg = msg
        self.achieved = achieved
        self.requested = requested
        super_msg = self._build_super_msg(msg, achieved=achieved, requested=requested)
        logger.error(super_msg)
        super(AccuracyError, self).__init__(super_msg)


class ConvergenceError(StarkError):
    """ Raised when an iteration fails to converge

    Attributes:

        iterations (int): iterations performed

        residual (float): last residual

        last_iterate (complex): last iterate
    """

    def __init__(self, msg, iterations=None, residual=None, last_iterate=None):
        self.msg = msg
        self.iterations = iterations
        self.residual = residual
        self.last_iterate = last_iterate
        super_msg = self._build_super_msg(
            msg, iterations=iterations, residual=residual, last_iterate=last_iterate
        )
        logger.error(super_msg)
        super(ConvergenceError, self).__init__(super_msg)


class RegimeError(StarkError):
    """ Raised when an asymptotic formula is requested outside its validity sector or index range """

    def __init__(self, msg, value=None, bound=None):
        self.msg = msg
        self.value = value
        self.bound = bound
        super_msg = self._build_super_msg(msg, value=value, bound=bound)
        logger.error(super_msg)
        super(RegimeError, self).__init__(super_msg)


class FitError(StarkError):
    """ Raised when there is not enough data, or data spread, for a least squares fit """

    def __init__(self, msg, size=None):
        self.msg = msg
        self.size = size
        super_msg = self._build_super_msg(msg, size=size)
        logger.error(super_msg)
        super(FitError, self).__init__(super_msg)


class SingularOperatorError(StarkError):
    """ Raised when I + M is numerically singular and its inverse is required

    Attributes:

        lambda_ (complex): spectral parameter, a candidate resonance

        condition (float): condition estimate of I + M
    """

    def __init__(self, msg, lambda_=None, condition=None):
        self.msg = msg
        self.lambda_ = lambda_
        self.condition = condition
        super_msg = self._build_super_msg(msg, lambda_=lambda_, condition=condition)
        logger.error(super_msg)
        super(SingularOperatorError, self).__init__(super_msg)


class _NewtonStalled(ConvergenceError):
    pass
