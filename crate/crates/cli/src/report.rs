use std::collections::BTreeMap;
use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use curvefill::bounds::TheoremDTable;
use curvefill::diagram::{CrossingDiagram, Family};
use curvefill::strat;

use crate::CliError;

/// JSON integer when it fits in 64 bits, decimal string otherwise.
pub fn big(i: &BigInt) -> Value {
    match i.to_i64() {
        Some(v) => json!(v),
        None => json!(i.to_string()),
    }
}

pub(crate) fn analyze(d: &CrossingDiagram) -> Result<Value, CliError> {
    let faces: Vec<Value> =
        d.faces().iter().map(|f| json!({ "id": f.id, "m": f.m, "punctures": f.punctures })).collect();
    let mut census: BTreeMap<(usize, u32), usize> = BTreeMap::new();
    for f in d.faces() {
        *census.entry((f.m, f.punctures)).or_default() += 1;
    }
    let census: Vec<Value> =
        census.into_iter().map(|((m, p), count)| json!({ "m": m, "punctures": p, "count": count })).collect();
    let bounding = |family| {
        (0..d.components(family).len()).map(|i| d.is_null_homologous(family, i)).collect::<Result<Vec<_>, _>>()
    };
    let report = strat::is_stratifiable(d)?;
    let euler = if d.is_closed() { json!(strat::euler_identity_check(d)?) } else { Value::Null };
    Ok(json!({
        "signature": d.signature(),
        "crossings": d.crossing_count(),
        "edges": d.edge_count(),
        "components": {
            "alpha": d.components(Family::Alpha).len(),
            "beta": d.components(Family::Beta).len(),
        },
        "faces": faces,
        "census": census,
        "homology": d.homology(),
        "null_homologous": { "alpha": bounding(Family::Alpha)?, "beta": bounding(Family::Beta)? },
        "checks": {
            "closed": d.is_closed(),
            "minimal_position": d.is_minimal_position(),
            "poincare_hopf": strat::poincare_hopf_check(d),
            "euler_identity": euler,
            "stratifiable": report.stratifiable,
        },
        "index_sum": report.index_sum,
    }))
}

pub(crate) fn theorem_d_csv(t: &TheoremDTable) -> String {
    let mut out = String::from(
        "n,distance,intersection,length_sum,upper,ratio_log_intersection,ratio_log_length,hempel_ratio\n",
    );
    for r in &t.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.n,
            r.distance,
            r.intersection,
            r.length_sum,
            r.upper,
            r.ratio_log_intersection,
            r.ratio_log_length,
            r.hempel_ratio
        )
        .expect("writing to a string");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_switches_to_strings_past_i64() {
        assert_eq!(big(&BigInt::from(-7)), json!(-7));
        let huge = BigInt::from(i64::MAX) + 1;
        assert_eq!(big(&huge), json!("9223372036854775808"));
    }
}
