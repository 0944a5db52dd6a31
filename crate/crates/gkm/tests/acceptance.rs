//! One line per acceptance criterion: `criterion N PASS|FAIL <what> [detail]`.
//!
//! Lines go straight to stderr so they show up even when the harness
//! captures output.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use gkm::cli::execute;
use gkm::format::{basis_from_json, Class};
use gkm::properties::{run_all, Subject};
use gkm::Mode;
use gkm_core::cohomology::{abbv_index, gt_class, icanonical_basis_h, poincare_dual_h, theta, verify_icanonical_h};
use gkm_core::equivariant::EquivClass;
use gkm_core::fixtures;
use gkm_core::kirwan::{kirwan_restrict, kirwan_restrict_from_source, reduced_fixed_data};
use gkm_core::ktheory::{atiyah_segal_index, cpn_prequantization_basis, icanonical_basis_k, psi_weight};
use gkm_core::symcore::{LaurentPoly, PolyH, Weight};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::Value;

const FAST: Duration = Duration::from_secs(1);
const SUITE_BUDGET: Duration = Duration::from_secs(60);
const SUITE_CASES: usize = 200;
const SEED: u64 = 20_240_601;

fn verdict(n: u32, what: &str, result: Result<(), String>) {
    let line = match &result {
        Ok(()) => format!("criterion {n} PASS {what}\n"),
        Err(d) => format!("criterion {n} FAIL {what}: {d}\n"),
    };
    let _ = std::io::stderr().write_all(line.as_bytes());
    if let Err(d) = result {
        panic!("criterion {n}: {d}");
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn w(c: &[i64]) -> Weight {
    Weight::from_i64s(c)
}

fn e(c: &[i64]) -> LaurentPoly {
    LaurentPoly::exp(&w(c))
}

fn om(c: &[i64]) -> LaurentPoly {
    LaurentPoly::one_minus_exp(&w(c))
}

fn one(rank: usize) -> LaurentPoly {
    LaurentPoly::one(rank)
}

fn zero(rank: usize) -> LaurentPoly {
    LaurentPoly::zero(rank)
}

fn json_of(args: &[&str]) -> Result<Value, String> {
    let out = execute(std::iter::once("gkm").chain(args.iter().copied()));
    check(out.code == 0, || format!("exit {}: {}", out.code, out.stderr.trim()))?;
    serde_json::from_str(&out.stdout).map_err(|e| e.to_string())
}

#[test]
fn k_basis_of_the_projective_plane() {
    let start = Instant::now();
    let result = (|| {
        let v = json_of(&["basis", "cp2", "ktheory", "--format", "json"])?;
        let g = fixtures::cp2();
        let (mode, basis) = basis_from_json(&v, &g).map_err(|e| e.to_string())?;
        check(mode == Mode::KTheory, || "wrong mode".into())?;
        let want = [
            vec![one(2), one(2), one(2)],
            vec![zero(2), om(&[1, 0]), om(&[0, 1])],
            vec![zero(2), zero(2), om(&[-1, 1]).mul(&om(&[0, 1]))],
        ];
        for (p, (got, want)) in basis.iter().zip(&want).enumerate() {
            let Class::K(got) = got else { return Err("not a K-class".into()) };
            check(got.values() == &want[..], || format!("tau[{}] = {:?}", g.vertex(p).id, got.values()))?;
        }
        check(basis.len() == 3, || format!("{} classes", basis.len()))?;
        let t = start.elapsed();
        check(t < FAST, || format!("took {t:?}"))
    })();
    verdict(1, "CP2 K-basis is {1; (0,1-e^x,1-e^y); (0,0,(1-e^(y-x))(1-e^y))}", result);
}

/// The multiset of nonzero values, as sorted display strings.
fn multiset(values: impl IntoIterator<Item = LaurentPoly>) -> Vec<LaurentPoly> {
    let mut v: Vec<LaurentPoly> = values.into_iter().filter(|p| !p.is_zero()).collect();
    v.sort_by_key(|p| p.to_string());
    v
}

fn relabel(p: &LaurentPoly, m: [[i64; 2]; 2]) -> LaurentPoly {
    p.map_exponents(2, |v| {
        let c = v.coords();
        Weight::new(vec![
            &c[0] * BigInt::from(m[0][0]) + &c[1] * BigInt::from(m[0][1]),
            &c[0] * BigInt::from(m[1][0]) + &c[1] * BigInt::from(m[1][1]),
        ])
    })
}

#[test]
fn k_basis_of_the_hirzebruch_surface() {
    let start = Instant::now();
    let result = (|| {
        let g = fixtures::hirzebruch();
        check(!g.is_index_increasing(), || "the inductive algorithm is not exercised".into())?;
        let basis = icanonical_basis_k(&g).map_err(|e| e.to_string())?;
        let got = multiset(basis.iter().flat_map(|c| c.values().to_vec()));
        let want: Vec<LaurentPoly> = [
            one(2),
            one(2),
            one(2),
            one(2),
            om(&[1, 1]),
            om(&[1, -1]).mul(&e(&[0, 1])),
            om(&[0, 1]),
            om(&[0, 1]).mul(&e(&[-1, 1])),
            om(&[0, 1]).mul(&om(&[-1, 1])),
        ]
        .into();
        // any relabeling of the lattice is allowed
        let mut matched = false;
        let r = -2..=2i64;
        for a in r.clone() {
            for b in r.clone() {
                for c in r.clone() {
                    for d in r.clone() {
                        if (a * d - b * c).abs() != 1 {
                            continue;
                        }
                        let m = [[a, b], [c, d]];
                        if multiset(want.iter().map(|p| relabel(p, m))) == got {
                            matched = true;
                        }
                    }
                }
            }
        }
        let shown: Vec<String> = got.iter().map(ToString::to_string).collect();
        check(matched, || {
            format!("{} nonzero values [{}] match no relabeling of the 9 expected", got.len(), shown.join("; "))
        })?;
        let t = start.elapsed();
        check(t < FAST, || format!("took {t:?}"))
    })();
    verdict(2, "Hirzebruch K-basis value multiset", result);
}

#[test]
fn worked_local_index() {
    let result = (|| {
        let v = json_of(&["local-index", "--fixture", "hirzebruch", "--class", "tau1", "--vertex", "q", "--format", "json"])?;
        let f: Vec<LaurentPoly> = v["f"]
            .as_array()
            .ok_or("no f")?
            .iter()
            .map(|t| gkm::format::Poly::from_json(t, Mode::KTheory, 3))
            .map(|p| match p {
                Ok(gkm::format::Poly::K(p)) => Ok(p),
                _ => Err("bad polynomial".to_string()),
            })
            .collect::<Result<_, _>>()?;
        let f0 = om(&[1, -1, 0]).mul(&e(&[0, 1, 1]));
        let f1 = om(&[1, -1, 0]);
        check(f.len() == 2 && f[0] == f0 && f[1] == f1, || {
            format!("f = [{}]", f.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
        })?;
        check(v["index"] == serde_json::json!([]), || format!("Ind_q = {}", v["index"]))
    })();
    verdict(3, "Ind_q = 0 with f0 = (1-e^(x-y))e^(y+w0), f1 = 1-e^(x-y)", result);
}

#[test]
fn global_index_of_the_unit() {
    let result = (|| {
        for g in [fixtures::cp1(), fixtures::cp2(), fixtures::cpn(3), fixtures::hirzebruch()] {
            let k = atiyah_segal_index(&g, &EquivClass::one(&g)).map_err(|e| e.to_string())?;
            check(k.is_one(), || format!("Ind(1) = {k} on a rank {} fixture", g.rank()))?;
            let h = abbv_index(&g, &EquivClass::one(&g)).map_err(|e| e.to_string())?;
            check(h.is_zero(), || format!("ABBV(1) = {h} on a rank {} fixture", g.rank()))?;
        }
        let v = json_of(&["index", "--fixture", "cp2", "--class", "one", "--format", "json"])?;
        check(v["index"] == serde_json::json!([["1", [0, 0]]]), || format!("cli: {}", v["index"]))
    })();
    verdict(4, "Ind(1) = 1 and ABBV(1) = 0 on cp1, cp2, cpn:3, hirzebruch", result);
}

#[test]
fn kirwan_map_on_the_square() {
    let result = (|| {
        let g = fixtures::square();
        let setup = reduced_fixed_data(&g, &[BigInt::from(1), BigInt::from(1)]).map_err(|e| e.to_string())?;
        let at = |id: &str| g.index_of(id).unwrap();
        let form = |c: &[i64]| PolyH::from_weight(&w(c));
        let mut values = vec![PolyH::zero(2); 4];
        values[at("q0")] = form(&[1, 1]);
        values[at("q1")] = form(&[4, 1]);
        values[at("q2")] = form(&[1, 7]);
        values[at("q3")] = form(&[4, 7]);
        let alpha = EquivClass::new(values);
        // x = w1 - w2
        let x = form(&[1, -1]);
        let minus_x = form(&[-1, 1]);
        for (src, want) in [("q1", &minus_x), ("q2", &x)] {
            let pt = setup.point(at(src)).ok_or("missing reduced point")?;
            let top = kirwan_restrict(&g, &setup, &alpha, pt).map_err(|e| e.to_string())?;
            let side = kirwan_restrict_from_source(&g, &setup, &alpha, pt).map_err(|e| e.to_string())?;
            check(top == *want && side == *want, || format!("at the edge from {src}: {top} and {side}"))?;
        }

        let file = std::env::temp_dir().join(format!("gkm-acceptance-{}.json", std::process::id()));
        let class = serde_json::json!({"class": {
            "q0": [["1", [1, 0]], ["1", [0, 1]]],
            "q1": [["4", [1, 0]], ["1", [0, 1]]],
            "q2": [["1", [1, 0]], ["7", [0, 1]]],
            "q3": [["4", [1, 0]], ["7", [0, 1]]],
        }});
        std::fs::write(&file, class.to_string()).map_err(|e| e.to_string())?;
        let v = json_of(&[
            "kirwan", "--fixture", "square", "--mode", "cohomology", "--pi", "1,1", "--class",
            file.to_str().unwrap(), "--format", "json",
        ]);
        let _ = std::fs::remove_file(&file);
        let v = v?;
        let by_source: BTreeMap<String, (Value, Value)> = v["points"]
            .as_array()
            .ok_or("no points")?
            .iter()
            .map(|p| (p["source"].as_str().unwrap_or("").to_string(), (p["value"].clone(), p["value_from_source"].clone())))
            .collect();
        let minus_x_json = serde_json::json!([["1", [0, 1]], ["-1", [1, 0]]]);
        let x_json = serde_json::json!([["-1", [0, 1]], ["1", [1, 0]]]);
        check(by_source.get("q1") == Some(&(minus_x_json.clone(), minus_x_json)), || format!("cli at q1: {:?}", by_source.get("q1")))?;
        check(by_source.get("q2") == Some(&(x_json.clone(), x_json)), || format!("cli at q2: {:?}", by_source.get("q2")))
    })();
    verdict(5, "kappa(alpha) = -x at p1 and x at p2, also from alpha1 and alpha2", result);
}

#[test]
fn three_way_cohomology_equality() {
    let result = (|| {
        for g in [fixtures::cp2(), fixtures::cpn(3)] {
            let taus = icanonical_basis_h(&g).map_err(|e| e.to_string())?;
            for (p, tau) in taus.iter().enumerate() {
                let eta = poincare_dual_h(&g, p);
                let zeta = gt_class(&g, p).map_err(|e| e.to_string())?;
                check(eta == zeta && zeta == *tau, || format!("classes differ at {}", g.vertex(p).id))?;
            }
        }
        let g = fixtures::hirzebruch();
        let etas: Vec<_> = (0..g.len()).map(|p| poincare_dual_h(&g, p)).collect();
        verify_icanonical_h(&g, &etas).map_err(|e| format!("hirzebruch: {e}"))
    })();
    verdict(6, "eta = zeta = tau on cp2, cpn:3; eta canonical on hirzebruch", result);
}

#[test]
fn theta_is_one_on_canonical_edges() {
    let result = (|| {
        let mut edges = 0;
        for g in fixtures::all() {
            for edge in g.canonical_edges() {
                let t = theta(&g, edge).map_err(|e| e.to_string())?;
                check(t.is_one(), || format!("theta = {t}"))?;
                edges += 1;
            }
        }
        check(edges > 0, || "no canonical edges".into())
    })();
    verdict(7, "theta = 1 on every canonical edge of every fixture", result);
}

#[test]
fn randomized_property_suites() {
    let start = Instant::now();
    let subjects: Vec<Subject> = ["cp1", "cp2", "cpn:3", "hirzebruch", "square"]
        .into_iter()
        .map(Subject::fixture)
        .collect();
    let results = run_all(&subjects, SEED, SUITE_CASES);
    let elapsed = start.elapsed();
    let result = (|| {
        for r in &results {
            check(r.passed(), || format!("{}: {}", r.name, r.failure.clone().unwrap_or_default()))?;
            check(r.cases >= SUITE_CASES, || format!("{} ran only {} cases", r.name, r.cases))?;
        }
        check(results.len() == 7, || format!("{} suites", results.len()))?;
        check(elapsed < SUITE_BUDGET, || format!("took {elapsed:?}"))
    })();
    verdict(8, &format!("7 seeded suites x {SUITE_CASES} cases in {:.1}s", elapsed.as_secs_f64()), result);
}

#[test]
fn projective_space_prequantization() {
    let result = (|| {
        for n in 1..=3 {
            let (g, classes) = cpn_prequantization_basis(n).map_err(|e| e.to_string())?;
            let basis = icanonical_basis_k(&g).map_err(|e| e.to_string())?;
            check(classes == basis, || format!("n = {n}: product formula differs from the basis"))?;
            // τ_{p_k}(s) = ∏_{j<k} (1 − e^{ψ(s) − ψ(p_j)}), zero below p_k
            for (k, tau) in basis.iter().enumerate() {
                for s in 0..g.len() {
                    let psi = |v: usize| psi_weight(&g, v).expect("lattice vertex");
                    let want = if s < k {
                        zero(n)
                    } else {
                        (0..k).fold(one(n), |acc, j| acc.mul(&LaurentPoly::one_minus_exp(&(&psi(s) - &psi(j)))))
                    };
                    check(*tau.value(s) == want, || {
                        format!("n = {n}: tau[{}]({}) = {}", g.vertex(k).id, g.vertex(s).id, tau.value(s))
                    })?;
                }
            }
        }
        Ok(())
    })();
    verdict(9, "CP^n product-formula classes equal the K-basis for n = 1, 2, 3", result);
}
