"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures to
distinct process exit statuses without a lookup table of its own.
"""

from __future__ import annotations


class ItossError(ValueError):
    exit_code = 1


class ModulusMismatch(ItossError):
    exit_code = 3


class NotPrime(ItossError):
    exit_code = 4


class ZeroInverse(ItossError, ZeroDivisionError):
    exit_code = 5


class BadThreshold(ItossError):
    exit_code = 6


class DuplicateId(ItossError):
    exit_code = 7


class ZeroId(ItossError):
    exit_code = 8


class IdNotInGroup(ItossError):
    exit_code = 9


class SelfSend(ItossError):
    exit_code = 10


class GroupTooSmall(ItossError):
    exit_code = 11


class NotCoprime(ItossError):
    exit_code = 12


class RoundCountTooLarge(ItossError):
    exit_code = 13


class IncompleteRcSet(ItossError):
    exit_code = 14


class InterfaceViolation(ItossError):
    exit_code = 15


class ManifestMismatch(ItossError):
    exit_code = 16


EXIT_CODES = {
    cls.__name__: cls.exit_code
    for cls in (
        ModulusMismatch,
        NotPrime,
        ZeroInverse,
        BadThreshold,
        DuplicateId,
        ZeroId,
        IdNotInGroup,
        SelfSend,
        GroupTooSmall,
        NotCoprime,
        RoundCountTooLarge,
        IncompleteRcSet,
        InterfaceViolation,
        ManifestMismatch,
    )
}
