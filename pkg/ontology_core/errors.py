"""
Exception hierarchy shared by every package.
Each package adds its own subclasses next to the code that raises them.
"""


class InformationCarryingError(Exception):
    """Base class for all library errors."""


class DuplicateId(InformationCarryingError):
    """An entity or event id is already registered."""

    def __init__(self, entity_id: str):
        self.entity_id = entity_id
        super().__init__(f"Duplicate id: {entity_id}")


class DanglingLink(InformationCarryingError):
    """An event links to an id the store does not know."""

    def __init__(self, role: str, entity_id: str):
        self.role = role
        self.entity_id = entity_id
        super().__init__(f"Dangling link {role}={entity_id}")


class RoleViolation(InformationCarryingError):
    """An event breaks the role/kind cardinality rules of its event kind."""


class UnknownEntity(InformationCarryingError):
    """Lookup of an id that is not registered (or has the wrong kind)."""

    def __init__(self, entity_id: str, detail: str = ""):
        self.entity_id = entity_id
        message = f"Unknown entity: {entity_id}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class LogSyntaxError(InformationCarryingError):
    """A line of an exported entity roster or event log cannot be parsed."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"Line {line}: {message}")
