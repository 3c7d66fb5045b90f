class PsitmError(Exception):
    """ Base class of all psitm domain errors """
    pass


class BudgetViolation(PsitmError):
    """
    Raised when an introspection payload is longer than the per-step budget
    B(d,n). Payloads are never truncated.
    """
    def __init__(self, step_index, payload_bits, budget_bits):
        self.step_index = step_index
        self.payload_bits = payload_bits
        self.budget_bits = budget_bits
        super(BudgetViolation, self).__init__(
            f"Step {step_index}: payload of {payload_bits} bits exceeds "
            f"the per-step budget of {budget_bits} bits")


class HaltedMachineError(PsitmError):
    pass


class SinglePassViolation(PsitmError):
    pass


class IntrospectionDepthError(PsitmError, ValueError):
    pass


class ViewUnavailable(PsitmError, LookupError):
    pass


class MalformedEncoding(PsitmError, ValueError):
    pass


class MachineFormatError(PsitmError, ValueError):
    pass
