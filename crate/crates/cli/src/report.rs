//! Serializable report structures. Field order is the canonical key order
//! of the machine-readable output, so serialized reports round-trip
//! byte-identically through the same structs.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use twograph::dynamics::{SimplicityReport, SquareBijectionReport};
use twograph::ktheory::{
    DualStepCheck, GcdObservation, KTheoryReport, KernelTrivialityReport, ReductionChain,
};
use twograph::zlin::AbelianGroup;
use twograph::BasicData;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RuleEntry {
    pub cell: [i64; 2],
    pub value: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FlagsDto {
    pub invertible_corners: bool,
    pub three_invertible_corners: bool,
    pub trace_shift_constant: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupDto {
    pub free_rank: usize,
    pub invariant_factors: Vec<String>,
}

impl GroupDto {
    pub fn from_group(g: &AbelianGroup) -> Self {
        GroupDto {
            free_rank: g.free_rank,
            invariant_factors: g.invariant_factors.iter().map(BigInt::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixChecksDto {
    pub blue_degree: u64,
    pub red_degree: u64,
    pub commute: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SquareDto {
    pub squares: usize,
    pub blue_red_pairs: usize,
    pub red_blue_pairs: usize,
    pub holds: bool,
}

impl SquareDto {
    pub fn from_report(r: &SquareBijectionReport) -> Self {
        SquareDto {
            squares: r.squares,
            blue_red_pairs: r.blue_red_pairs,
            red_blue_pairs: r.red_blue_pairs,
            holds: r.holds,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SimplicityDto {
    pub c1_positive: bool,
    pub c2_positive: bool,
    pub trace_ok: bool,
    pub three_invertible_corners: bool,
    pub all_hold: bool,
    pub loop_vertex: Option<usize>,
    pub loop_degree: Option<[i64; 2]>,
    pub notes: Vec<String>,
}

impl SimplicityDto {
    pub fn from_report(r: &SimplicityReport) -> Self {
        SimplicityDto {
            c1_positive: r.c1_positive,
            c2_positive: r.c2_positive,
            trace_ok: r.trace_ok,
            three_invertible_corners: r.three_invertible_corners,
            all_hold: r.all_hold,
            loop_vertex: r.loop_with_entrance.as_ref().map(|w| w.vertex),
            loop_degree: r
                .loop_with_entrance
                .as_ref()
                .map(|w| [w.loop_path.degree().x, w.loop_path.degree().y]),
            notes: r.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct UnitClassDto {
    pub coordinates: Vec<String>,
    pub order: Option<String>,
    pub generates_coker: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct KTheoryDto {
    pub coker_d1: GroupDto,
    pub ker_d2_rank: usize,
    pub k0: GroupDto,
    pub k0_order: Option<String>,
    pub k1: GroupDto,
    pub k1_order: Option<String>,
    pub unit_class: UnitClassDto,
    pub column_basis_det: Option<String>,
}

impl KTheoryDto {
    pub fn from_report(r: &KTheoryReport) -> Self {
        KTheoryDto {
            coker_d1: GroupDto::from_group(&r.coker_d1),
            ker_d2_rank: r.ker_d2_rank,
            k0: GroupDto::from_group(&r.k0),
            k0_order: r.k0_order().map(|b| b.to_string()),
            k1: GroupDto::from_group(&r.k1),
            k1_order: r.k1_order().map(|b| b.to_string()),
            unit_class: UnitClassDto {
                coordinates: r.unit.coordinates.iter().map(BigInt::to_string).collect(),
                order: r.unit.order.as_ref().map(BigInt::to_string),
                generates_coker: r.unit.generates_coker,
            },
            column_basis_det: r.column_basis_det.as_ref().map(BigInt::to_string),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct KernelCheckDto {
    pub ker_blue_rank: usize,
    pub ker_red_rank: usize,
    pub ker_d2_rank: usize,
    pub first_column_strictly_tallest: bool,
    pub first_row_strictly_longest: bool,
    pub chain_kernel_rank: Option<usize>,
}

impl KernelCheckDto {
    pub fn from_report(r: &KernelTrivialityReport) -> Self {
        KernelCheckDto {
            ker_blue_rank: r.ker_blue_rank,
            ker_red_rank: r.ker_red_rank,
            ker_d2_rank: r.ker_d2_rank,
            first_column_strictly_tallest: r.first_column_strictly_tallest,
            first_row_strictly_longest: r.first_row_strictly_longest,
            chain_kernel_rank: r.chain_kernel_rank,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DualStepDto {
    pub base_vertices: usize,
    pub class_count: usize,
    pub reduced_vertices: usize,
    pub multiplier: String,
    pub blue_edges_checked: usize,
}

impl DualStepDto {
    pub fn from_check(c: &DualStepCheck) -> Self {
        DualStepDto {
            base_vertices: c.base_vertices,
            class_count: c.class_count,
            reduced_vertices: c.reduced_vertices,
            multiplier: c.multiplier.to_string(),
            blue_edges_checked: c.blue_edges_checked,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReductionDto {
    pub tiles: Vec<Vec<u32>>,
    pub multipliers: Vec<String>,
    pub verified_steps: Vec<DualStepDto>,
}

impl ReductionDto {
    pub fn from_chain(chain: &ReductionChain, checks: &[DualStepCheck]) -> Self {
        ReductionDto {
            tiles: chain.tiles.iter().map(|t| t.rows().to_vec()).collect(),
            multipliers: chain.multipliers.iter().map(BigInt::to_string).collect(),
            verified_steps: checks.iter().map(DualStepDto::from_check).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GcdDto {
    pub gcd: String,
    pub k0_order: Option<String>,
    pub matches: Option<bool>,
}

impl GcdDto {
    pub fn from_observation(o: &GcdObservation) -> Self {
        GcdDto {
            gcd: o.gcd.to_string(),
            k0_order: o.k0_order.as_ref().map(BigInt::to_string),
            matches: o.matches,
        }
    }
}

/// The full machine-readable report of the `report` subcommand.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CliReport {
    pub tile: Vec<u32>,
    pub q: u64,
    pub trace: u64,
    pub rule: Vec<RuleEntry>,
    pub flags: FlagsDto,
    pub vertex_count: usize,
    pub matrices: MatrixChecksDto,
    pub square_bijection: Option<SquareDto>,
    pub simplicity: SimplicityDto,
    pub ktheory: KTheoryDto,
    pub kernel_check: Option<KernelCheckDto>,
    pub kernel_check_note: Option<String>,
    pub k0_equals_k1: Option<bool>,
    pub reduction: Option<ReductionDto>,
    pub reduction_note: Option<String>,
    pub gcd_observation: GcdDto,
}

pub fn rule_entries(data: &BasicData) -> Vec<RuleEntry> {
    data.tile()
        .cells()
        .iter()
        .zip(data.rule())
        .map(|(c, &v)| RuleEntry {
            cell: [c.x, c.y],
            value: v,
        })
        .collect()
}

/// Rows of the `table` subcommand output.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableRowDto {
    pub tile: Vec<u32>,
    pub q: u64,
    pub k0: Option<String>,
    pub k1: Option<String>,
    pub expected_k0: Option<u64>,
    pub expected_k1: Option<u64>,
    pub matches: Option<bool>,
    pub error: Option<String>,
}
