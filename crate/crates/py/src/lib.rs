use pyo3::prelude::*;

use chessbisect::error::Error;

pyo3::create_exception!(pychessbisect, ParityZeroNoWitness, pyo3::exceptions::PyException, "Even count and no witness found.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::ParityZeroNoWitness(_) => ParityZeroNoWitness::new_err(e.to_string()),
        Error::Io(_) => pyo3::exceptions::PyOSError::new_err(e.to_string()),
        _ => pyo3::exceptions::PyValueError::new_err(e.to_string()),
    }
}

#[pymodule]
mod pychessbisect {
    use num_bigint::BigUint;
    use pyo3::prelude::*;

    use chessbisect::arrangement::{signature, FamilySpec};
    use chessbisect::io::{parse_problem, parse_problem_str, ProblemFile};
    use chessbisect::linalg::Subspace;
    use chessbisect::measures::counter::{certify_no_bisection_fixed_directions, counterexample_config};
    use chessbisect::oracle::{enumerate_bisectors, precheck_generic};
    use chessbisect::parity::{compute_n, stirling2 as stirling2_exact, stirling_parity_table};
    use chessbisect::rat;
    use chessbisect::solve::{solve as solve_points, Engine, SolveOptions};
    use chessbisect::svg::render_svg;

    use super::to_py;

    #[pymodule_export]
    use super::ParityZeroNoWitness;

    /// A validated problem file: families plus colored points or measures.
    #[pyclass(frozen)]
    struct Problem {
        inner: ProblemFile,
        specs: Vec<FamilySpec>,
    }

    impl Problem {
        fn wrap(inner: ProblemFile) -> PyResult<Self> {
            let specs = inner.specs().map_err(to_py)?;
            Ok(Problem { inner, specs })
        }
    }

    #[pymethods]
    impl Problem {
        #[staticmethod]
        fn from_json(text: &str) -> PyResult<Self> {
            Problem::wrap(parse_problem_str(text).map_err(to_py)?)
        }

        #[staticmethod]
        fn load(path: std::path::PathBuf) -> PyResult<Self> {
            Problem::wrap(parse_problem(&path).map_err(to_py)?)
        }

        #[getter]
        fn dimension(&self) -> usize {
            self.inner.dimension
        }

        #[getter]
        fn num_families(&self) -> usize {
            self.specs.len()
        }

        fn to_json(&self) -> String {
            self.inner.to_json()
        }

        fn parity(&self) -> PyResult<ParityReport> {
            let r = compute_n(&signature(&self.specs).map_err(to_py)?).map_err(to_py)?;
            Ok(ParityReport { n: r.n, n_mod2: r.n_mod2, group_order: r.group_order, closed_form_mod2: r.closed_form_mod2 })
        }

        /// One bisecting arrangement of the problem's points.
        #[pyo3(signature = (engine = "path-following", seed = None, oracle_bound = None))]
        fn solve(&self, py: Python<'_>, engine: &str, seed: Option<u64>, oracle_bound: Option<u64>) -> PyResult<Solution> {
            let engine = match engine {
                "path-following" => Engine::PathFollowing,
                "tracked" => Engine::Tracked,
                other => return Err(pyo3::exceptions::PyValueError::new_err(format!("unknown engine {other:?}"))),
            };
            let mut options = SolveOptions { engine, seed: seed.or(self.inner.options.seed).unwrap_or(0), ..SolveOptions::default() };
            if let Some(b) = oracle_bound.or(self.inner.options.oracle_bound) {
                options.oracle_budget = b as f64;
            }
            let config = self.inner.config().map_err(to_py)?;
            let solution = py.detach(|| solve_points(&config, &self.specs, &options)).map_err(to_py)?;
            Ok(Solution { inner: solution })
        }

        /// Color partitions of every bisecting arrangement, in bar notation.
        fn enumerate(&self, py: Python<'_>) -> PyResult<Vec<String>> {
            let config = self.inner.config().map_err(to_py)?;
            precheck_generic(&config, &self.specs).map_err(to_py)?;
            let all = py.detach(|| enumerate_bisectors(&config, &self.specs));
            Ok(all.iter().map(|b| b.assignment.color_notation()).collect())
        }

        /// SVG drawing of a solved planar problem.
        #[pyo3(signature = (seed = None))]
        fn render_svg(&self, py: Python<'_>, seed: Option<u64>) -> PyResult<String> {
            let solution = self.solve(py, "path-following", seed, None)?;
            let config = self.inner.config().map_err(to_py)?;
            render_svg(&config, &solution.inner.arrangement).map_err(to_py)
        }
    }

    #[pyclass(frozen, get_all)]
    struct ParityReport {
        n: BigUint,
        n_mod2: u8,
        group_order: BigUint,
        closed_form_mod2: Option<u8>,
    }

    #[pyclass(frozen)]
    struct Solution {
        inner: chessbisect::solve::Solution,
    }

    #[pymethods]
    impl Solution {
        #[getter]
        fn partition(&self) -> String {
            self.inner.assignment.color_notation()
        }

        #[getter]
        fn parity(&self) -> u8 {
            self.inner.parity
        }

        #[getter]
        fn oracle_agrees(&self) -> Option<bool> {
            self.inner.oracle_agrees
        }

        /// `(normal, offset)` pairs with rationals as `"p/q"` strings.
        #[getter]
        fn hyperplanes(&self) -> Vec<(Vec<String>, String)> {
            self.inner
                .arrangement
                .hyperplanes()
                .iter()
                .map(|h| (h.normal.iter().map(rat::format).collect(), rat::format(&h.offset)))
                .collect()
        }

        fn to_json(&self) -> String {
            serde_json::to_string(&self.inner).expect("solutions serialize")
        }
    }

    #[pyfunction]
    fn stirling2(m: usize, k: usize) -> BigUint {
        stirling2_exact(m, k)
    }

    /// `table[d-1][k-1] = S(d+k-1, k) mod 2`.
    #[pyfunction]
    fn parity_table(d_max: usize, k_max: usize) -> Vec<Vec<u32>> {
        // Lists of u8 would convert to bytes.
        stirling_parity_table(d_max, k_max).into_iter().map(|row| row.into_iter().map(u32::from).collect()).collect()
    }

    /// Segments no fixed-direction arrangement bisects, as JSON; with
    /// `certify` the exact certification is included.
    #[pyfunction]
    #[pyo3(signature = (d, ks, certify = false, seed = 0))]
    fn counterexample(py: Python<'_>, d: usize, ks: Vec<usize>, certify: bool, seed: u64) -> PyResult<String> {
        if ks.len() > d {
            return Err(pyo3::exceptions::PyValueError::new_err("more directions than coordinate axes"));
        }
        let specs = ks
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let axis = (0..d).map(|j| rat::int(i64::from(i == j))).collect();
                FamilySpec::new(Subspace::from_basis(d, vec![axis])?, k)
            })
            .collect::<chessbisect::error::Result<Vec<_>>>()
            .map_err(to_py)?;
        let ce = counterexample_config(&specs, seed).map_err(to_py)?;
        let mut value = serde_json::json!({ "counterexample": ce });
        if certify {
            let cert = py.detach(|| certify_no_bisection_fixed_directions(&specs, &ce.measures)).map_err(to_py)?;
            value["certification"] = serde_json::to_value(cert).expect("certificates serialize");
        }
        Ok(value.to_string())
    }
}
