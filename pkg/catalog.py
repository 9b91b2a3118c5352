"""
Catalog of the implemented bounds, keyed by bound id.

Each entry records the comparison function the bound is built from, the
seminorm it multiplies, where it applies and where it may be evaluated. The
harness uses the catalog to validate cases and to build the brute-force
oracle (seminorm * mean of |g(x) - g(t)|) for every closed form.

Reading notes for formulas whose printed form is inconsistent are kept in
`notes`; each names the reading that is implemented.
"""
from dataclasses import dataclass

from errors import PreconditionError
from expr import FunctionSpec, parse

# Comparison functions by kind; "power" and "local_power" are built per case
COMPARISONS = {
    "linear": "t",
    "log": "ln(t)",
    "exp": "exp(t)",
    "sin": "sin(t)",
    "cos": "cos(t)",
    "reciprocal": "1/t",
}

# Domain requirements
DOMAIN_ANY = "any"
DOMAIN_POSITIVE = "positive"          # [a, b] inside (0, inf)
DOMAIN_QUARTER_TURN = "quarter_turn"  # [a, b] inside (0, pi/2)

# Point policies
POINT_ANY = "any"            # x in [a, b]
POINT_INTERIOR = "interior"  # x in (a, b)
POINT_MIDPOINT = "midpoint"  # x = (a + b)/2 only
POINT_MEDIAN = "median"      # x = weight median only


@dataclass(frozen=True)
class BoundEntry:
    """
    Parameters:
    - bound_id: Identifier used on the command line and in reports
    - title: Short human-readable name
    - comparison: Key of COMPARISONS, or "power", "local_power", "user"
    - constant: Name of the constant the bound multiplies
    - domain: DOMAIN_* requirement on [a, b]
    - point: POINT_* policy for x
    - split: Separate constants on (a, x) and (x, b)
    - weighted: Needs a weight w
    - needs_p: Needs the exponent p
    - notes: Reading notes
    """

    bound_id: str
    title: str
    comparison: str
    constant: str
    domain: str = DOMAIN_ANY
    point: str = POINT_ANY
    split: bool = False
    weighted: bool = False
    needs_p: bool = False
    notes: tuple = ()

    @property
    def needs_g(self):
        return self.comparison == "user"


_ENTRIES = (
    BoundEntry("1.1", "classic Ostrowski", "linear", "M = sup |f'|"),
    BoundEntry("1.2", "power comparison", "power", "K_p = sup u^(1-p) |f'(u)|",
               domain=DOMAIN_POSITIVE, needs_p=True,
               notes=("p = -1 uses the logarithmic mean; p = 0 is rejected",)),
    BoundEntry("1.3", "logarithmic comparison", "log", "P = sup |u f'(u)|", domain=DOMAIN_POSITIVE),
    BoundEntry("1.4", "local power, one constant", "local_power", "M = sup |x - u|^(1-p) |f'(u)|",
               needs_p=True),
    BoundEntry("2.2", "general comparison function", "user", "||f'/g'||"),
    BoundEntry("2.5", "general comparison function at the midpoint", "user", "||f'/g'||",
               point=POINT_MIDPOINT),
    BoundEntry("2.7", "exponential comparison", "exp", "Gamma, |f'(t)| <= Gamma e^t",
               notes=("the hypothesis is printed with e^(-t); the bound is built from g = e^t, "
                      "so |f'(t)| <= Gamma e^t is used",
                      "the left-hand side is printed at the midpoint; f(x) is used")),
    BoundEntry("2.8", "exponential comparison at the midpoint", "exp", "Gamma, |f'(t)| <= Gamma e^t",
               point=POINT_MIDPOINT),
    BoundEntry("2.10", "sine comparison", "sin", "Gamma1, |f'(t)| <= Gamma1 cos t",
               domain=DOMAIN_QUARTER_TURN),
    BoundEntry("2.11", "sine comparison at the midpoint", "sin", "Gamma1, |f'(t)| <= Gamma1 cos t",
               domain=DOMAIN_QUARTER_TURN, point=POINT_MIDPOINT),
    BoundEntry("2.13", "cosine comparison", "cos", "Gamma2, |f'(t)| <= Gamma2 sin t",
               domain=DOMAIN_QUARTER_TURN,
               notes=("the hypothesis is printed with Gamma1; Gamma2 is meant",
                      "g = cos t decreases, so the printed bracket is negative; its absolute value is used")),
    BoundEntry("2.14", "cosine comparison at the midpoint", "cos", "Gamma2, |f'(t)| <= Gamma2 sin t",
               domain=DOMAIN_QUARTER_TURN, point=POINT_MIDPOINT,
               notes=("the printed sign is folded by the absolute value",)),
    BoundEntry("2.15", "general comparison, split constants", "user", "||f'/g'|| on (a, x), (x, b)",
               point=POINT_INTERIOR, split=True),
    BoundEntry("2.19", "general comparison, split constants at the midpoint", "user",
               "||f'/g'|| on (a, A), (A, b)", point=POINT_MIDPOINT, split=True),
    BoundEntry("2.21", "local power, split constants", "local_power",
               "M1, M2 = sup |x - u|^(1-p) |f'(u)| on each side",
               point=POINT_INTERIOR, split=True, needs_p=True,
               notes=("the printed constants carry |x - t|^(p-1); with that exponent the bound fails "
                      "for p != 1, so |x - t|^(1-p) is used",
                      "the printed factor (b - a) is a division, consistent with the one-constant form")),
    BoundEntry("2.23", "local power, split constants at the midpoint", "local_power",
               "M1, M2 = sup |A - u|^(1-p) |f'(u)| on each side",
               point=POINT_MIDPOINT, split=True, needs_p=True,
               notes=("implemented with (b - a)^p, the exponent consistent with the one-constant form",)),
    BoundEntry("3.1", "power comparison at the midpoint", "power", "M1, M2, |f'(t)| <= M_i t^(p-1) on each half",
               domain=DOMAIN_POSITIVE, point=POINT_MIDPOINT, split=True, needs_p=True,
               notes=("the envelope is printed as t^p; t^(p-1) matches the factor 1/(2p)",
                      "the factor is 1/(2|p|) so the bound stays nonnegative for p < 0",
                      "p = -1 is covered by 3.5 and p = 0 by 3.7")),
    BoundEntry("3.3", "linear comparison at the midpoint", "linear", "N1, N2, |f'| <= N_i on each half",
               domain=DOMAIN_POSITIVE, point=POINT_MIDPOINT, split=True,
               notes=("the condition is printed as N_i t; the constant envelope N_i is the reading "
                      "that yields (b - a)(N1 + N2)/8",)),
    BoundEntry("3.5", "reciprocal comparison at the midpoint", "reciprocal",
               "M1, M2, |f'(t)| <= M_i t^(-2) on each half",
               domain=DOMAIN_POSITIVE, point=POINT_MIDPOINT, split=True),
    BoundEntry("3.7", "logarithmic comparison at the midpoint", "log",
               "M1, M2, |f'(t)| <= M_i / t on each half",
               domain=DOMAIN_POSITIVE, point=POINT_MIDPOINT, split=True),
    BoundEntry("4.2", "weighted general comparison", "user", "||f'/g'||",
               point=POINT_INTERIOR, weighted=True),
    BoundEntry("4.6", "weighted general comparison at the weight median", "user", "||f'/g'||",
               point=POINT_MEDIAN, weighted=True),
    BoundEntry("4.7", "weighted general comparison, split constants", "user",
               "||f'/g'|| on (a, x), (x, b)", point=POINT_INTERIOR, split=True, weighted=True),
)

BOUND_CATALOG = {entry.bound_id: entry for entry in _ENTRIES}

# Bounds whose seminorm is a multiple of ||f'/g'||: bound constant = scale * ||f'/g'||
_SCALE_BY_P = {"1.2", "3.1"}            # |g'| = |p| t^(p-1)
_SCALE_BY_LOCAL_P = {"1.4", "2.21", "2.23"}  # |g'| = p |x - t|^(p-1)


def get_entry(bound_id):
    try:
        return BOUND_CATALOG[str(bound_id)]
    except KeyError:
        raise PreconditionError(
            f"unknown bound id {bound_id!r}; known ids: {', '.join(BOUND_CATALOG)}"
        ) from None


def comparison_function(entry, p=None, x=None, g=None):
    """
    The comparison function g a bound is built from.

    Parameters:
    - entry: BoundEntry
    - p: Exponent for power and local-power bounds
    - x: Evaluation point for local-power bounds
    - g: User comparison function for the general bounds

    Returns a FunctionSpec.
    """
    if entry.comparison == "user":
        if g is None:
            raise PreconditionError(f"bound {entry.bound_id} needs a comparison function g")
        return g
    if entry.comparison == "power":
        return FunctionSpec.power(p)
    if entry.comparison == "local_power":
        return parse(f"abs(t - ({x!r}))^({p!r})")
    return parse(COMPARISONS[entry.comparison])


def norm_scale(entry, p=None):
    """
    Factor turning ||f'/g'|| into the constant the bound multiplies.

    For g = t^p the bound's constant is |p| ||f'/g'||; for g = |x - t|^p it
    is p ||f'/g'||; otherwise the two coincide.
    """
    if entry.bound_id in _SCALE_BY_P:
        return abs(p)
    if entry.bound_id in _SCALE_BY_LOCAL_P:
        return p
    return 1.0
