class InputError(ValueError):
    """Malformed user input: bad letters, bad parameters, unparsable files."""


class ContractError(ValueError):
    """An operation was called on an argument that violates its precondition."""
