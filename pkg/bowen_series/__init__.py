from .moebius import (
	BoundaryPoint,
	Geodesic,
	MoebiusMap,
	apply,
	cayley_transform,
	circle_derivative,
	classify_element,
	compose,
	geodesic,
	reflection_in_geodesic,
	three_point_map,
)
from .circle_maps import (
	Arc,
	NonIntegerWindingError,
	NonMarkovError,
	NotPeriodicError,
	PiecewiseMap,
	TransitionMatrix,
	check_continuity,
	check_markov,
	classify_break_points,
	covering_degree,
	evaluate,
	expansivity_proxy,
	fundamental_domain,
	mateability_report,
	minimize,
	one_sided_multipliers,
	refine_iterate,
)
from .catalog import (
	GroupPresentation,
	LabeledMap,
	bowen_series,
	build_named_map,
	completely_folding,
	higher_bowen_series,
	interpolating_map,
	non_example_b,
	non_example_c,
	punctured_sphere_group,
	reflection_map_n,
	thrice_punctured_group,
)
from .symbolic import (
	ConvergenceError,
	Cylinder,
	Sft,
	coding_map,
	cylinder_mass,
	entropy,
	grand_orbit_search,
	orbit_equivalence_heuristic,
	parry_measure,
	perron,
	point_of_itinerary,
)
from .freegroup import (
	FreeWord,
	GenSet,
	critical_exponent_bracket,
	ps_limit_cone_mass,
	ps_partial_cone_mass,
	sphere_sizes,
	volume_entropy,
)
from .conjugacy import CircleHomeo, build_phi, h_map, minkowski_q
from .dimension import IntervalMarkovMap, f_bs, f_hbs, hausdorff_mme, lyapunov_bracket, tau, vertex_set
from .render import RenderSpec, render_fundamental_domain, render_interval_map, render_tessellation
from .report_store import ReportRecord, ReportStorageError, ReportYamlRepository

__all__ = [
	"BoundaryPoint",
	"Geodesic",
	"MoebiusMap",
	"apply",
	"cayley_transform",
	"circle_derivative",
	"classify_element",
	"compose",
	"geodesic",
	"reflection_in_geodesic",
	"three_point_map",
	"Arc",
	"NonIntegerWindingError",
	"NonMarkovError",
	"NotPeriodicError",
	"PiecewiseMap",
	"TransitionMatrix",
	"check_continuity",
	"check_markov",
	"classify_break_points",
	"covering_degree",
	"evaluate",
	"expansivity_proxy",
	"fundamental_domain",
	"mateability_report",
	"minimize",
	"one_sided_multipliers",
	"refine_iterate",
	"GroupPresentation",
	"LabeledMap",
	"bowen_series",
	"build_named_map",
	"completely_folding",
	"higher_bowen_series",
	"interpolating_map",
	"non_example_b",
	"non_example_c",
	"punctured_sphere_group",
	"reflection_map_n",
	"thrice_punctured_group",
	"ConvergenceError",
	"Cylinder",
	"Sft",
	"coding_map",
	"cylinder_mass",
	"entropy",
	"grand_orbit_search",
	"orbit_equivalence_heuristic",
	"parry_measure",
	"perron",
	"point_of_itinerary",
	"FreeWord",
	"GenSet",
	"critical_exponent_bracket",
	"ps_limit_cone_mass",
	"ps_partial_cone_mass",
	"sphere_sizes",
	"volume_entropy",
	"CircleHomeo",
	"build_phi",
	"h_map",
	"minkowski_q",
	"IntervalMarkovMap",
	"f_bs",
	"f_hbs",
	"hausdorff_mme",
	"lyapunov_bracket",
	"tau",
	"vertex_set",
	"RenderSpec",
	"render_fundamental_domain",
	"render_interval_map",
	"render_tessellation",
	"ReportRecord",
	"ReportStorageError",
	"ReportYamlRepository",
]
