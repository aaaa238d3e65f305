"""Exception types shared across the toolkit.

Input validation failures raise plain ValueError; the classes below mark
the two conditions callers are expected to branch on.
"""


class CapacityError(Exception):
    """An exact-enumeration request exceeds the configured desk-scale caps."""


class InternalFault(Exception):
    """An invariant the mathematics guarantees was violated.

    This is never a user error: it means the software contradicted a proven
    statement (e.g. a valid certificate failed to verify, or a staircase
    continuation did not exist). Callers surface it loudly and archive the
    offending configuration.
    """
