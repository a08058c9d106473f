"""Exception types shared by the library and the command line front end."""


class SchemaError(ValueError):
    """Malformed input document (polynomial, domain or system file)."""


class DomainError(ValueError):
    """A point or segment lies outside the analytic domain it is queried on."""


class IntegrabilityError(ValueError):
    """The matrices of a system in several variables do not commute as connections."""

    def __init__(self, i: int, j: int):
        super().__init__(f"integrability fails for the pair ({i}, {j})")
        self.pair = (i, j)
