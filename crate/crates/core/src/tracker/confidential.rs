use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::units::Gw;

use super::record::{Origin, Snapshot};

/// Replaces each confidential record by one synthetic record per region,
/// sized by that region's share of non-confidential capacity. Launch year and
/// status are inherited; total capacity is unchanged.
pub fn distribute_confidential(snapshot: &Snapshot) -> Result<Snapshot> {
    let (confidential, open): (Vec<_>, Vec<_>) =
        snapshot.records.iter().partition(|r| r.confidential);
    if confidential.is_empty() {
        return Ok(snapshot.clone());
    }
    let mut by_region: BTreeMap<&str, Gw> = BTreeMap::new();
    for r in &open {
        *by_region.entry(r.region.as_str()).or_default() += r.capacity;
    }
    let total: Gw = by_region.values().sum();
    if total.value() <= 0.0 {
        return Err(Error::validation(format!(
            "snapshot {} has only confidential capacity; regional shares are undefined",
            snapshot.vintage_year
        )));
    }

    let mut records: Vec<_> = open.into_iter().cloned().collect();
    for c in confidential {
        let n = by_region.len();
        let mut assigned = Gw::ZERO;
        for (i, (region, cap)) in by_region.iter().enumerate() {
            // last region takes the remainder so the sum is exact
            let share = if i + 1 == n {
                c.capacity - assigned
            } else {
                c.capacity * (cap.value() / total.value())
            };
            assigned += share;
            let mut rec = c.clone();
            rec.ref_id = format!("{}~{}", c.ref_id, region);
            rec.region = region.to_string();
            rec.capacity = share;
            rec.origin = Origin::ConfidentialShare {
                source_ref: c.ref_id.clone(),
            };
            records.push(rec);
        }
    }
    Snapshot::new(snapshot.vintage_year, records)
}
