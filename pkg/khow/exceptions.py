"""
Custom exception classes for the toolkit.

These are used to provide consistent error handling across the CLI and the
HTTP routers. Undefined plan relations and bisimulation/filtration violations
are ordinary values, not exceptions.
"""
from typing import Optional


class KhowError(Exception):
    """Base exception for all toolkit errors."""

    def __init__(self, message: str, status_code: int = 400):
        self.message = message
        self.status_code = status_code
        super().__init__(self.message)


class FormulaSyntaxError(KhowError):
    """Raised when formula text does not match the grammar."""

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} at byte offset {offset}", status_code=422)


class UnknownAgentError(KhowError):
    """Raised when a formula or request names an agent outside the agent set."""

    def __init__(self, agent: str):
        self.agent = agent
        super().__init__(f"Unknown agent: {agent}", status_code=422)


class EmptyAgentSetError(KhowError):
    """Raised when an operation needs a nonempty agent set."""

    def __init__(self):
        super().__init__("Agent set must be nonempty", status_code=422)


class UnknownStateError(KhowError):
    """Raised when a state id is not in the model."""

    def __init__(self, state: str):
        self.state = state
        super().__init__(f"Unknown state: {state}", status_code=404)


class ModelFormatError(KhowError):
    """Raised when a model document does not match the file schema."""

    def __init__(self, message: str):
        super().__init__(f"Invalid model document: {message}", status_code=422)


class ModelInvariantError(KhowError):
    """Raised when a model violates a structural invariant."""

    def __init__(self, message: str, clause: Optional[str] = None):
        self.clause = clause
        if clause:
            message = f"{message} (plan-set clause {clause})"
        super().__init__(message, status_code=422)


class EmptyPlanSetError(ModelInvariantError):
    """Raised when an agent's collection contains the empty plan set."""

    def __init__(self, agent: str):
        self.agent = agent
        super().__init__(f"empty plan set for agent {agent}", clause="(iv)")


class PreconditionError(KhowError):
    """Raised when an operation's input is outside the class it requires."""

    def __init__(self, test: str, message: str):
        self.test = test
        super().__init__(f"{message} (failed test: {test})", status_code=409)


class SigmaNotClosedError(KhowError):
    """Raised when a formula set is not closed under subformulas."""

    def __init__(self, missing: str):
        self.missing = missing
        super().__init__(f"Formula set is not subformula-closed: missing {missing}", status_code=422)


class ValuationCapError(KhowError):
    """Raised when a model realizes more distinct valuations than the profile cap."""

    def __init__(self, found: int, cap: int):
        super().__init__(
            f"Model realizes {found} distinct valuations; the cap is {cap} (KHOW_MAX_VALUATIONS)",
            status_code=413,
        )


class MissingBindingError(KhowError):
    """Raised when an axiom schema is instantiated without all metavariables bound."""

    def __init__(self, schema: str, metavariable: str):
        super().__init__(f"Schema {schema} needs a binding for {metavariable}", status_code=422)


class UnknownSchemaError(KhowError):
    """Raised when an axiom schema name is not recognized."""

    def __init__(self, name: str):
        super().__init__(f"Unknown axiom schema: {name}", status_code=404)
