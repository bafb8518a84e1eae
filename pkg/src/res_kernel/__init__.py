"""Exact blow-up algorithms: principalization of ideals over the rationals and toric fans."""

from res_kernel.charts import (
    Center,
    Chart,
    InadmissibleCenter,
    blow_up_charts,
    controlled_transform,
    root_chart,
    strict_transform,
    total_transform,
)
from res_kernel.contact import (
    NoAlgebraicContact,
    coefficient_ideal,
    find_maximal_contact,
    homogenization,
    restrict_to_hypersurface,
    tschirnhaus,
)
from res_kernel.driver import (
    BlowUpTree,
    BudgetExhausted,
    DriverFailure,
    ResolutionResult,
    detect_embedded_resolution,
    is_smooth_hypersurface,
    order_reduce,
    principalize,
)
from res_kernel.ideal import (
    GREVLEX,
    GRLEX,
    LEX,
    GroebnerCapExceeded,
    Ideal,
    MonomialOrder,
    combine,
    contains,
    eliminate,
    groebner_basis,
    ideals_equal,
    is_unit_ideal,
    normal_form,
    saturate,
)
from res_kernel.order import MarkedIdeal, derivative_ideal, max_order, monomial_part, ord_at_point, t_ideal
from res_kernel.poly import Monomial, Polynomial, PolynomialSyntaxError, UnknownVariableError, parse_polynomial
from res_kernel.reembed import compare_reembedding
from res_kernel.toric import (
    Cone,
    Fan,
    cone_is_smooth,
    is_regular_fan,
    multiplicity,
    resolve_fan_2d,
    smith_normal_form,
    stellar_subdivide,
)
from res_kernel.trace import TraceDocument, check_trace

__version__ = "0.1.0"
