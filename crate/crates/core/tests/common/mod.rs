//! Dimension tables frozen as JSON fixtures, from the library and from the oracle.
#![allow(dead_code)]

use std::path::PathBuf;

use leflab::cohomology::{build_filtered_complex, DdLambdaCohomology};
use leflab::model::SymplecticModel;
use serde::{Deserialize, Serialize};

use crate::oracle::Oracle;

/// Models whose tables are frozen.
pub const FIXTURE_MODELS: &[&str] = &["kodaira_thurston", "nil6_two_step", "nil6_free_two_step", "nil6_four_step"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tables {
    pub model: String,
    pub betti: Vec<usize>,
    /// `filtered[p]` lists `dim F^pH^k` for `k = 0..=2n+2p+1`.
    pub filtered: Vec<Vec<usize>>,
    pub h_d_plus_dlambda: Vec<usize>,
    pub h_ddlambda: Vec<usize>,
    pub ph_d_plus_dlambda: Vec<usize>,
    pub ph_ddlambda: Vec<usize>,
}

impl Tables {
    pub fn to_fixture_text(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize") + "\n"
    }
}

pub fn library_tables(model: &SymplecticModel) -> Tables {
    let filtered = (0..=model.n())
        .map(|p| {
            let fc = build_filtered_complex(model, p).expect("complex builds");
            fc.cohomology().iter().map(|h| h.dim()).collect()
        })
        .collect();
    let all = DdLambdaCohomology::compute(model).expect("cohomologies");
    let dims = |v: &[leflab::cohomology::CohomologySpace]| v.iter().map(|h| h.dim()).collect();
    Tables {
        model: model.name().to_string(),
        betti: model.derham().betti,
        filtered,
        h_d_plus_dlambda: dims(&all.plus),
        h_ddlambda: dims(&all.dd),
        ph_d_plus_dlambda: dims(&all.primitive_plus),
        ph_ddlambda: dims(&all.primitive_dd),
    }
}

pub fn model_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models").join(format!("{name}.json"))
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(format!("{name}.json"))
}

pub fn oracle(name: &str) -> Oracle {
    Oracle::from_json(&std::fs::read_to_string(model_path(name)).expect("model file"))
}

pub fn oracle_tables(name: &str) -> Tables {
    let o = oracle(name);
    Tables {
        model: name.to_string(),
        betti: o.betti(),
        filtered: (0..=o.n).map(|p| o.filtered_cohomology(p)).collect(),
        h_d_plus_dlambda: o.h_d_plus_dlambda(),
        h_ddlambda: o.h_ddlambda(),
        ph_d_plus_dlambda: o.ph_d_plus_dlambda(),
        ph_ddlambda: o.ph_ddlambda(),
    }
}

/// The frozen fixture text; `LEFLAB_REGEN_FIXTURES=1` rewrites it from the oracle first.
pub fn frozen_fixture(name: &str) -> String {
    let path = fixture_path(name);
    if std::env::var("LEFLAB_REGEN_FIXTURES").as_deref() == Ok("1") {
        std::fs::write(&path, oracle_tables(name).to_fixture_text()).expect("write fixture");
    }
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("fixture {} is missing ({e}); regenerate with LEFLAB_REGEN_FIXTURES=1", path.display()))
}
