use std::collections::HashMap;

use super::ast::{ComponentDecl, ModelDocument, ParamSpec};
use super::eval::eval_matrix;
use super::parser::GRID_CAP;
use crate::error::{Error, Result};
use crate::linalg::{adjoint, zeros};
use crate::slh::{series_product, HamiltonianSpec, SlhTriple};
use crate::uncertainty::{UncertainModel, UncertaintySample};

fn component_triple(
    comp: &ComponentDecl,
    bindings: &HashMap<String, f64>,
) -> Result<SlhTriple> {
    let ctx = |e: Error| Error::Instantiate(format!("component '{}': {e}", comp.name));
    let (n, m) = (comp.n_modes, comp.n_channels);
    let s = eval_matrix(&comp.s, bindings)?;
    let c_minus = eval_matrix(&comp.c_minus, bindings)?;
    let c_plus = match &comp.c_plus {
        Some(lit) => eval_matrix(lit, bindings)?,
        None => zeros(m, n),
    };
    let h_minus = match &comp.h_minus {
        Some(lit) => eval_matrix(lit, bindings)?,
        None => zeros(n, n),
    };
    let h_plus = match &comp.h_plus {
        Some(lit) => eval_matrix(lit, bindings)?,
        None => zeros(n, n),
    };
    let h = HamiltonianSpec::new(h_minus, h_plus).map_err(ctx)?;
    SlhTriple::new(s, c_minus, c_plus, h).map_err(ctx)
}

fn network_triple(doc: &ModelDocument, bindings: &HashMap<String, f64>) -> Result<SlhTriple> {
    let mut names = doc.cascade.iter();
    let first = names
        .next()
        .ok_or_else(|| Error::Instantiate("document declares no cascade".into()))?;
    let lookup = |name: &String| {
        doc.components
            .get(name)
            .ok_or_else(|| Error::Instantiate(format!("undeclared component '{name}'")))
    };
    let mut acc = component_triple(lookup(first)?, bindings)?;
    for name in names {
        let next = component_triple(lookup(name)?, bindings)?;
        acc = series_product(&acc, &next)?;
    }
    Ok(acc)
}

/// Grid of values for one parameter: the nominal alone for a single point,
/// otherwise uniformly spaced over the interval with exact endpoints.
fn grid_values(p: &ParamSpec) -> Vec<f64> {
    let k = p.grid_points;
    if k == 1 {
        return vec![p.nominal];
    }
    (0..k)
        .map(|idx| {
            if idx == k - 1 {
                p.hi
            } else {
                p.lo + (p.hi - p.lo) * idx as f64 / (k - 1) as f64
            }
        })
        .collect()
}

/// Expand a parsed document into a nominal triple plus one uncertainty
/// sample per Cartesian grid point. Grid iteration is row-major over
/// parameters in declaration order (the last-declared parameter varies
/// fastest); the point whose bindings all equal the nominal values yields
/// the zero sample exactly.
pub fn instantiate(doc: &ModelDocument) -> Result<UncertainModel> {
    let mut nominal_bindings: HashMap<String, f64> = HashMap::new();
    for p in doc.params.values() {
        nominal_bindings.insert(p.name.clone(), p.nominal);
    }
    let nominal = network_triple(doc, &nominal_bindings)?;

    let specs: Vec<&ParamSpec> = doc.params.values().collect();
    let grids: Vec<Vec<f64>> = specs.iter().map(|p| grid_values(p)).collect();
    let total: u128 = grids.iter().map(|g| g.len() as u128).product();
    if total > GRID_CAP {
        return Err(Error::InvalidModel(format!(
            "parameter grid has {total} points, exceeding the cap of {GRID_CAP}"
        )));
    }

    let mut samples = Vec::with_capacity(total as usize);
    for flat in 0..total as usize {
        let mut rem = flat;
        let mut bindings = nominal_bindings.clone();
        let mut at_nominal = true;
        for j in (0..specs.len()).rev() {
            let k = grids[j].len();
            let value = grids[j][rem % k];
            rem /= k;
            if value != specs[j].nominal {
                at_nominal = false;
            }
            bindings.insert(specs[j].name.clone(), value);
        }
        if at_nominal {
            samples.push(UncertaintySample::zero(nominal.n_modes(), nominal.n_channels()));
            continue;
        }
        let point = network_triple(doc, &bindings)?;
        let delta_s = adjoint(nominal.s()).dot(point.s());
        let delta_c_minus = point.c_minus() - nominal.c_minus();
        let delta_c_plus = point.c_plus() - nominal.c_plus();
        let delta_h = point.hamiltonian().sub(nominal.hamiltonian())?;
        let sample = UncertaintySample::new(delta_s, delta_c_minus, delta_c_plus, delta_h)
            .map_err(|e| Error::Instantiate(format!("grid point {flat}: {e}")))?;
        samples.push(sample);
    }
    UncertainModel::new(nominal, samples, doc.analysis.eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, max_abs_diff, C64};
    use crate::netdesc::parse;
    use crate::realization::to_state_space;
    use crate::uncertainty::eta_bound;
    use ndarray::array;

    const CAVITY: &str = "
param gamma nominal 0 in [-0.5, 0.5] grid 3
param delta nominal 0 in [0, 0] grid 1
component cavity modes 1 channels 3 {
  S      = I(3)
  Cminus = [sqrt(1 + gamma); 1; 1]
  Hminus = [delta]
}
cascade cavity
";

    #[test]
    fn cavity_grid_expands_to_three_samples() {
        let model = instantiate(&parse(CAVITY).unwrap()).unwrap();
        assert_eq!(model.samples().len(), 3);
        assert_eq!(model.samples().iter().filter(|s| s.is_zero(1e-12)).count(), 1);
        let a_n = to_state_space(model.nominal()).unwrap().a().clone();
        let expect = array![
            [C64::new(-1.5, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(-1.5, 0.0)]
        ];
        assert!(max_abs_diff(&a_n, &expect) < 1e-12);
        // gamma = -0.5 comes first in row-major order, then 0, then 0.5.
        let first = &model.samples()[0];
        let d = 0.5f64.sqrt() - 1.0;
        assert!((first.delta_c_minus()[(0, 0)].re - d).abs() < 1e-15);
    }

    #[test]
    fn degenerate_intervals_leave_only_the_zero_sample() {
        let text = "
param g nominal 0.25 in [0.25, 0.25] grid 5
component c modes 1 channels 1 { S = I(1) Cminus = [1 + g] }
cascade c
";
        let model = instantiate(&parse(text).unwrap()).unwrap();
        assert_eq!(model.samples().len(), 5);
        assert!(model.samples().iter().all(|s| s.is_zero(1e-12)));
        assert_eq!(eta_bound(&model).unwrap().computed, 0.0);
    }

    #[test]
    fn cascade_of_static_scatterers_multiplies_s() {
        let text = "
component a modes 1 channels 2 {
  S = [0, 1; 1, 0]
  Cminus = [0; 0]
}
component b modes 1 channels 2 {
  S = [i, 0; 0, 1]
  Cminus = [0; 0]
}
cascade a <| b
";
        let model = instantiate(&parse(text).unwrap()).unwrap();
        let s = model.nominal().s();
        // a <| b feeds b's output into a: S = S_a S_b.
        let expect = array![
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            [C64::new(0.0, 1.0), C64::new(0.0, 0.0)]
        ];
        assert!(max_abs_diff(s, &expect) < 1e-15);
        assert!(max_abs(model.nominal().c_minus()) == 0.0);
    }

    #[test]
    fn grid_order_is_row_major_with_last_parameter_fastest() {
        let text = "
param a nominal 0 in [0, 1] grid 2
param b nominal 0 in [0, 1] grid 2
component c modes 1 channels 1 { S = I(1) Cminus = [1 + a + 10*b] }
cascade c
";
        let model = instantiate(&parse(text).unwrap()).unwrap();
        let offsets: Vec<f64> = model
            .samples()
            .iter()
            .take(4)
            .map(|s| s.delta_c_minus()[(0, 0)].re)
            .collect();
        // (a, b) in order (0,0), (0,1), (1,0), (1,1).
        assert_eq!(offsets, vec![0.0, 10.0, 1.0, 11.0]);
    }

    #[test]
    fn declared_eta_flows_through_analysis_block() {
        let text = "
component c modes 1 channels 1 { S = I(1) Cminus = [1] }
cascade c
analysis { eta = 0.75 }
";
        let model = instantiate(&parse(text).unwrap()).unwrap();
        assert_eq!(model.declared_eta(), Some(0.75));
        assert_eq!(model.samples().len(), 1);
    }

    #[test]
    fn non_unitary_scattering_at_a_grid_point_is_reported() {
        let text = "
param g nominal 0 in [0, 1] grid 2
component c modes 1 channels 1 { S = [1 + g] Cminus = [1] }
cascade c
";
        let err = instantiate(&parse(text).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Instantiate(_)));
    }
}
