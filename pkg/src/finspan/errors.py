"""Exception types raised across the package."""


class FinspanError(Exception):
    pass


class SizeGuardExceeded(FinspanError):
    def __init__(self, what, bound, guard):
        super().__init__(f"{what}: bound {bound} exceeds guard {guard}")
        self.what = what
        self.bound = bound
        self.guard = guard


class CategoryViolation(FinspanError):
    """A single violated category axiom, naming its witnesses."""

    kind = "violation"

    def __init__(self, *witnesses, detail=""):
        self.witnesses = witnesses
        self.detail = detail
        msg = f"{self.kind}: {', '.join(map(str, witnesses))}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class MissingComposite(CategoryViolation):
    kind = "MissingComposite"


class NonAssociative(CategoryViolation):
    kind = "NonAssociative"


class BadIdentity(CategoryViolation):
    kind = "BadIdentity"


class DanglingEndpoint(CategoryViolation):
    kind = "DanglingEndpoint"


class InvalidCategory(FinspanError):
    def __init__(self, violations):
        self.violations = list(violations)
        head = "; ".join(str(v) for v in self.violations[:5])
        super().__init__(f"{len(self.violations)} violation(s): {head}")


class TargetMismatch(FinspanError):
    pass


class NoTerminalObject(FinspanError):
    pass


class EmptyFactorizationSet(FinspanError):
    def __init__(self, e):
        super().__init__(f"no factorization of {e}")
        self.e = e


class MissingPullback(FinspanError):
    def __init__(self, f, g):
        super().__init__(f"no pullback of cospan ({f}, {g})")
        self.cospan = (f, g)


class NoAdjoint(FinspanError):
    def __init__(self, which, detail=""):
        super().__init__(f"no adjoint for {which} {detail}".strip())
        self.which = which


class NoLeftAdjoint(NoAdjoint):
    pass


class NoRightAdjoint(NoAdjoint):
    pass


class PrerequisiteMateNotInvertible(FinspanError):
    pass


class PrerequisiteFailed(FinspanError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NoZigZag(FinspanError):
    pass


class StepNotInvertible(FinspanError):
    def __init__(self, step, obj):
        super().__init__(f"comparison step {step} not invertible at {obj}")
        self.step = step
        self.obj = obj


class DecompositionFailed(FinspanError):
    pass


class MissingProduct(FinspanError):
    def __init__(self, a, b):
        super().__init__(f"no product of {a} and {b}")
        self.pair = (a, b)


class FamilyNotClosedUnderTensor(FinspanError):
    pass


class NoFiberProducts(FinspanError):
    pass


class ParseError(FinspanError):
    def __init__(self, line, column, expected):
        super().__init__(f"line {line}, column {column}: expected {expected}")
        self.line = line
        self.column = column
        self.expected = expected


class DuplicateIdentifier(ParseError):
    def __init__(self, name, line, column=1):
        FinspanError.__init__(self, f"line {line}: duplicate identifier {name!r}")
        self.name = name
        self.line = line
        self.column = column
        self.expected = "a fresh identifier"


class UnknownReference(ParseError):
    def __init__(self, name, line, column=1):
        FinspanError.__init__(self, f"line {line}, column {column}: unknown reference {name!r}")
        self.name = name
        self.line = line
        self.column = column
        self.expected = "a declared identifier"


class RelationClosureDiverges(FinspanError):
    pass
