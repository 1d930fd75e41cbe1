use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::arith::{factorize, FactoredInteger};
use crate::closure::is_2_closed;
use crate::corpus::CorpusEntry;
use crate::error::{Error, Result};
use crate::fixity::{ElementCensus, FixityResult, PrimeFixProfile};
use crate::perm::Permutation;
use crate::structure::{is_solvable, minimal_normal_subgroups, normal_subgroups, NormalSubgroupInfo};
use crate::Caps;

/// Everything the checks read about one group.
///
/// Optional fields are `None` when a cap prevented their computation; the
/// reason is kept in `absent`.
#[derive(Clone, Debug)]
pub struct GroupAnalysis {
    pub entry: CorpusEntry,
    pub degree_factored: FactoredInteger,
    pub order_factored: FactoredInteger,
    /// Order of the stabilizer of point 0.
    pub stabilizer_order: FactoredInteger,
    pub primes_g: BTreeSet<u64>,
    pub primes_stab: BTreeSet<u64>,
    pub transitive: bool,
    pub smallest_prime_g: Option<u64>,
    pub fixity: Option<FixityResult>,
    pub elusive: Option<bool>,
    pub prime_profile: Option<PrimeFixProfile>,
    /// `Some(None)` means the scan ran and found no derangement.
    pub derangement: Option<Option<Permutation>>,
    pub prime_derangements: Option<BTreeMap<u64, Permutation>>,
    pub two_closed: Option<bool>,
    pub solvable: Option<bool>,
    pub normal_lattice: Option<Vec<NormalSubgroupInfo>>,
    pub minimal_normals: Option<Vec<NormalSubgroupInfo>>,
    pub absent: BTreeMap<String, String>,
}

impl GroupAnalysis {
    pub fn name(&self) -> &str {
        &self.entry.name
    }

    pub fn degree(&self) -> usize {
        self.entry.declared_degree
    }

    pub fn fixity_value(&self) -> Option<usize> {
        self.fixity.as_ref().map(|f| f.fixity)
    }

    pub fn reason(&self, field: &str) -> String {
        self.absent.get(field).cloned().unwrap_or_else(|| "not computed".into())
    }

    /// Structured summary used by the command-line front end.
    pub fn to_json(&self) -> Value {
        let lattice = self.normal_lattice.as_ref().map(|l| {
            l.iter()
                .map(|n| {
                    json!({
                        "order": n.order.value().to_string(),
                        "abelian": n.is_abelian,
                        "cyclic": n.is_cyclic,
                        "p_group_for": n.is_p_group_for,
                        "semiregular": n.is_semiregular,
                        "minimal": n.is_minimal_normal,
                    })
                })
                .collect::<Vec<_>>()
        });
        let profile = self.prime_profile.as_ref().map(|p| {
            p.by_prime
                .keys()
                .map(|&q| {
                    (
                        q.to_string(),
                        json!({"prime_power": p.prime_power_counts(q), "prime_order": p.prime_order_counts(q)}),
                    )
                })
                .collect::<serde_json::Map<_, _>>()
        });
        json!({
            "name": self.entry.name,
            "degree": self.degree(),
            "degree_factored": self.degree_factored.to_string(),
            "order": self.order_factored.value().to_string(),
            "order_factored": self.order_factored.to_string(),
            "stabilizer_order": self.stabilizer_order.value().to_string(),
            "transitive": self.transitive,
            "fixity": self.fixity_value(),
            "fixity_witness": self.fixity.as_ref().map(|f| f.witness.format_cycles()),
            "fixity_witness_fixed_set": self.fixity.as_ref().map(|f| f.witness_fixed_set.clone()),
            "elusive": self.elusive,
            "two_closed": self.two_closed,
            "solvable": self.solvable,
            "normal_subgroup_orders": self.normal_lattice.as_ref().map(|l| l.iter().map(|n| n.order.value().to_string()).collect::<Vec<_>>()),
            "normal_lattice": lattice,
            "prime_fix_profile": profile,
            "absent": self.absent,
        })
    }
}

fn soften<T>(r: Result<T>, field: &str, absent: &mut BTreeMap<String, String>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_cap() => {
            absent.insert(field.to_string(), e.to_string());
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Computes the full record for a transitive group. Cap failures leave
/// fields absent; anything else is an error.
pub fn analyze(entry: &CorpusEntry, caps: &Caps) -> Result<GroupAnalysis> {
    let g = &entry.group;
    if !g.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let order = g.order()?;
    let stab_order = g.point_stabilizer(0)?.order()?;
    let order_factored = factorize(order)?;
    let stabilizer_order = factorize(stab_order)?;
    let mut absent = BTreeMap::new();

    let census = soften(ElementCensus::scan(g, caps.enumeration_cap), "census", &mut absent)?;
    if let Some(reason) = absent.remove("census") {
        for f in ["fixity", "elusive", "prime_profile", "derangement"] {
            absent.insert(f.into(), reason.clone());
        }
    }
    if census.as_ref().is_some_and(|c| c.fixity.is_none()) {
        absent.insert("fixity".into(), Error::TrivialGroup.to_string());
    }
    let two_closed = soften(is_2_closed(g, caps.closure_degree_cap), "two_closed", &mut absent)?;
    let solvable = soften(is_solvable(g), "solvable", &mut absent)?;
    let lattice = soften(normal_subgroups(g, caps), "normal_lattice", &mut absent)?;
    if let Some(reason) = absent.get("normal_lattice").cloned() {
        absent.insert("minimal_normals".into(), reason);
    }

    Ok(GroupAnalysis {
        degree_factored: factorize(g.degree() as u64)?,
        primes_g: order_factored.primes(),
        primes_stab: stabilizer_order.primes(),
        smallest_prime_g: order_factored.smallest_prime(),
        order_factored,
        stabilizer_order,
        transitive: true,
        fixity: census.as_ref().and_then(|c| c.fixity.clone()),
        elusive: census.as_ref().map(ElementCensus::is_elusive),
        prime_profile: census.as_ref().map(|c| c.profile.clone()),
        derangement: census.as_ref().map(|c| c.derangement.clone()),
        prime_derangements: census.map(|c| c.prime_derangements),
        two_closed,
        solvable,
        minimal_normals: lattice.as_deref().map(minimal_normal_subgroups),
        normal_lattice: lattice,
        absent,
        entry: entry.clone(),
    })
}
