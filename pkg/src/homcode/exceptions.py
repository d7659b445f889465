"""Exception types raised across homcode."""


class HomcodeError(Exception):
    """Base class for domain errors (the CLI maps these to exit code 2)."""


class StructureError(HomcodeError, ValueError):
    """Malformed cell complex: dangling references, bad dimensions, duplicates."""


class AdmissibilityError(HomcodeError, ValueError):
    """Complex is structurally fine but not usable for a code (d∂ != 0 or non-unit incidence)."""


class DegreeError(HomcodeError, ValueError):
    """Degree, modulus or range mismatch."""


class CapacityError(HomcodeError):
    """A size guard refused the request."""


class InfeasibleSyndromeError(HomcodeError):
    """Syndrome is not in the image of the relevant (co)boundary map."""


class BundleSpecError(HomcodeError, ValueError):
    """Inconsistent or incomplete bundle description."""
