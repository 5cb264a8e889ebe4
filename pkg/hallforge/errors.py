"""Exceptions raised by hall-forge constructions and the certificate layer."""

from typing import Optional


class HallForgeError(Exception):
    """Base class for construction errors.

    Attributes:
        stage: Optional label of the pipeline stage that failed.
    """

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.stage = stage

    def at_stage(self, stage: str) -> "HallForgeError":
        """Returns this error labelled with `stage` unless already labelled."""
        if self.stage is None:
            self.stage = stage
        return self

    def __str__(self):
        if self.stage:
            return f"[{self.stage}] {self.message}"
        return self.message


class ParseError(HallForgeError, ValueError):
    """Malformed cycle notation, word, or input file."""


class DegreeMismatch(HallForgeError, ValueError):
    """Permutations of different degrees were combined."""


class OrderTooLarge(HallForgeError):
    """A group exceeded the enumeration bound.

    Callers that can work from a stabilizer chain should catch this and stay
    chain-based.
    """

    def __init__(self, bound: int, what: str = "group",
                 stage: Optional[str] = None):
        super().__init__(f"{what} has more than {bound} elements", stage)
        self.bound = bound


class NotAHomomorphism(HallForgeError):
    """Generator images do not extend to a homomorphism."""


class NotInjective(HallForgeError):
    """A map required to be an embedding has a nontrivial kernel."""


class NotAnAutomorphism(HallForgeError):
    """A map required to be an automorphism is not bijective."""


class SubgroupNotInvariant(HallForgeError):
    """An automorphism does not leave a subgroup invariant."""


class DegreeCapExceeded(HallForgeError):
    """A regular representation would exceed the configured degree cap."""


class SizeBoundExceeded(HallForgeError):
    """A brute-force search was asked about groups above its size bound."""


class InvalidPartialIso(HallForgeError):
    """A partial map between subgroups is not an isomorphism."""


class HypothesisFailed(HallForgeError):
    """The hypotheses of a commuting or root extension do not hold."""


class NotEquivariant(HallForgeError):
    """An embedding does not intertwine the automorphism tuples."""


class DepthTooLarge(HallForgeError):
    """A tower was requested beyond the representable depth."""


class StageTooSmall(HallForgeError):
    """A group does not fit into the requested tower stage."""


class CertificateError(HallForgeError):
    """A certificate could not be parsed or is internally inconsistent."""
