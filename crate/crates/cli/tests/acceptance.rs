//! Acceptance gate: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p pxp-cli --test acceptance`.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use pxp_cli::{LevelStatsSummary, NeumannReport, RelationsOutput};
use pxp_core::independence::polynomial::{rational, Polynomial};
use pxp_core::independence::{
    classify_relation, find_relations, is_strongly_independent, is_weakly_independent,
    max_independent_subset, maximal_by_inclusion_check, QimSubset, RelationClass,
};
use pxp_core::lattice::verify_conservation;
use pxp_core::signatures::{count_via_transfer_matrix, is_attainable, CountTarget, FoliationReport};
use pxp_core::spectral::{
    block_statistics, contract_defects, cut_factorization_check, eigensolve_symmetric,
    neumann_interpolate, r_statistic, resolve_symmetry, DenseMatrix, LevelStatOptions, Parity,
};
use pxp_core::independence::attainable_signatures;
use pxp_core::{Boundary, Error, LatticeSpec, Signature, SpinConfiguration};

type Check = Result<String, String>;

fn pxp(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_pxp"))
        .args(args)
        .env_remove("PXP_MAX_N")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "pxp {} exited {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn core<T>(r: pxp_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn table_regression() -> Check {
    let start = Instant::now();
    let text = pxp(&["sectors", "--n", "3"])?;
    let elapsed = start.elapsed();
    let report: FoliationReport = serde_json::from_str(text.trim()).map_err(|e| e.to_string())?;
    let got: Vec<(String, u64)> = report
        .sectors
        .iter()
        .map(|s| (s.signature.to_string(), s.dimension))
        .collect();
    let want: Vec<(String, u64)> = [("000", 4), ("100", 1), ("010", 1), ("001", 1), ("111", 1)]
        .iter()
        .map(|&(s, d)| (s.to_string(), d))
        .collect();
    ensure(got == want, || format!("sectors {got:?}"))?;
    let spec = core(LatticeSpec::periodic(3))?;
    for forbidden in ["110", "101", "011"] {
        let s: Signature = forbidden.parse().map_err(|e: Error| e.to_string())?;
        ensure(!core(is_attainable(&spec, &s))?.attainable, || format!("{forbidden} attainable"))?;
    }
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("5 sectors, 3 sum-2 signatures rejected, {elapsed:.2?}"))
}

fn conservation_suite() -> Check {
    let start = Instant::now();
    let mut edges = 0;
    for n in 3..=12 {
        for bc in [Boundary::Periodic, Boundary::Open] {
            let rep = core(verify_conservation(&core(LatticeSpec::new(n, bc))?))?;
            ensure(rep.passed, || format!("n={n} {bc}: {:?}", rep.counterexample))?;
            edges += rep.edges_checked;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!("N = 3..12, both boundaries, {edges} edges, {elapsed:.2?}"))
}

fn relation_recovery() -> Check {
    for n in 5..=12 {
        let spec = core(LatticeSpec::periodic(n))?;
        for start in 1..=n {
            let sub = core(QimSubset::window(&spec, start, 3))?;
            let rels = core(find_relations(&spec, &sub, 3))?;
            ensure(rels.len() == 1, || format!("n={n} window {start}: {} relations", rels.len()))?;
            // the span must be that of x*y*z - x*z in window order
            let idx = sub.indices();
            let pos = |site: usize| idx.iter().position(|&i| i == site).unwrap();
            let (x, y, z) = (pos(start), pos(start % n + 1), pos((start + 1) % n + 1));
            let xz = (1u64 << x) | (1 << z);
            let xyz = xz | (1 << y);
            let terms = rels[0].poly().terms();
            let ok = terms.len() == 2
                && terms.get(&xz).is_some_and(|c| *c == -terms[&xyz].clone())
                && terms.contains_key(&xyz);
            ensure(ok, || format!("n={n} window {start}: {}", rels[0]))?;
            let pair = core(QimSubset::window(&spec, start, 2))?;
            ensure(core(find_relations(&spec, &pair, 2))?.is_empty(), || {
                format!("n={n}: window-2 relation at {start}")
            })?;
        }
    }
    let out: RelationsOutput =
        serde_json::from_str(pxp(&["relations", "--n", "6", "--window", "3", "--degree", "3"])?.trim())
            .map_err(|e| e.to_string())?;
    ensure(out.reports.iter().all(|r| r.relations.len() == 1), || "cli relations".into())?;
    Ok("one-dimensional span of x*y*z - x*z for N = 5..12, none for windows of 2".into())
}

fn triviality_classifier() -> Check {
    let spec = core(LatticeSpec::periodic(6))?;
    let sub = core(QimSubset::new(&spec, vec![1, 2, 3]))?;
    let x = Polynomial::var(3, 0);
    let y = Polynomial::var(3, 1);
    let z = Polynomial::var(3, 2);
    let one = Polynomial::constant(3, rational(1, 1));
    let cases = [
        ("x^2 - x", &(&x * &x) - &x, RelationClass::Trivial),
        ("x*y*(y - x*z)*z", &(&(&x * &y) * &(&y - &(&x * &z))) * &z, RelationClass::Trivial),
        ("x*(y - 1)*z", &(&x * &(&y - &one)) * &z, RelationClass::Nontrivial),
    ];
    for (name, f, want) in cases {
        let got = core(classify_relation(&spec, &sub, &f))?;
        ensure(got == want, || format!("{name}: {got:?}"))?;
    }
    Ok("x^2 - x, x*y*(y - x*z)*z trivial; x*(y - 1)*z nontrivial".into())
}

fn maximal_sets() -> Check {
    let start = Instant::now();
    for n in [6, 9, 12] {
        let spec = core(LatticeSpec::periodic(n))?;
        let best = core(max_independent_subset(&spec))?;
        let want: Vec<usize> = (1..=n).filter(|i| i % 3 != 0).collect();
        ensure(best.exhaustive && best.size == 2 * n / 3 && best.subset.indices() == want, || {
            format!("n={n}: {:?}", best)
        })?;
        for k in (3..=n).step_by(3) {
            let mut idx = want.clone();
            idx.push(k);
            let sub = core(QimSubset::from_unsorted(&spec, idx))?;
            ensure(!core(is_strongly_independent(&spec, &sub))?.independent, || {
                format!("n={n}: adding I_{k} kept independence")
            })?;
        }
    }
    for n in [6, 8, 10] {
        let spec = core(LatticeSpec::periodic(n))?;
        let even = core(QimSubset::new(&spec, (2..=n).step_by(2).collect()))?;
        let rep = core(maximal_by_inclusion_check(&spec, &even))?;
        ensure(rep.precondition_met && rep.maximal_by_inclusion, || format!("n={n}: {rep:?}"))?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(300))?;
    Ok(format!("2N/3 maximizer for N = 6, 9, 12; even set maximal for N = 6, 8, 10; {elapsed:.2?}"))
}

fn weak_independence() -> Check {
    for n in 3..=12 {
        let spec = core(LatticeSpec::periodic(n))?;
        let v = core(is_weakly_independent(&spec, &QimSubset::all(&spec)))?;
        ensure(v.independent, || format!("n={n} not weakly independent"))?;
    }
    let spec = core(LatticeSpec::periodic(3))?;
    let v = core(is_weakly_independent(&spec, &QimSubset::all(&spec)))?;
    let ket = |s: &str| SpinConfiguration::from_ket(s).unwrap();
    let pair = (ket("↑↑↓"), ket("↓↑↓"));
    ensure(v.witnesses.iter().any(|w| w.states == Some(pair)), || {
        format!("witnesses {:?}", v.witnesses)
    })?;
    Ok("full family weakly independent for N = 3..12, witness (|↑↑↓⟩, |↓↑↓⟩) at N = 3".into())
}

fn counting_cross_check() -> Check {
    let mut zero_dims = Vec::new();
    for n in 3..=14 {
        for bc in [Boundary::Periodic, Boundary::Open] {
            let spec = core(LatticeSpec::new(n, bc))?;
            let width = spec.n_qims();
            let mut sigs = BTreeSet::new();
            let mut zero = 0u64;
            for c in 0..1u64 << n {
                let sig: u64 = (0..width)
                    .filter(|&i| (c >> i) & 1 == 1 && (c >> ((i + 1) % n)) & 1 == 1)
                    .fold(0, |s, i| s | (1 << i));
                if sig == 0 {
                    zero += 1;
                }
                sigs.insert(sig);
            }
            let t_zero = count_via_transfer_matrix(&spec, CountTarget::ZeroSectorDim);
            let t_sigs = count_via_transfer_matrix(&spec, CountTarget::AttainableSignatures);
            ensure(t_zero == zero && t_sigs == sigs.len() as u64, || {
                format!("n={n} {bc}: transfer ({t_zero}, {t_sigs}) vs brute ({zero}, {})", sigs.len())
            })?;
            ensure(attainable_signatures(&spec).len() == sigs.len(), || format!("n={n} {bc}: signature list"))?;
            if bc == Boundary::Periodic && n <= 6 {
                zero_dims.push(zero);
            }
        }
    }
    ensure(zero_dims == [4, 7, 11, 18], || format!("zero-sector dims {zero_dims:?}"))?;
    Ok("transfer matrix = enumeration for N <= 14, zero-sector dims 4, 7, 11, 18".into())
}

/// Mean gap ratio of GOE matrices, central half of each spectrum.
fn goe_reference() -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut sum, mut count) = (0.0, 0usize);
    for _ in 0..300 {
        let size = 120;
        let a = DMatrix::<f64>::from_fn(size, size, |_, _| rng.sample(StandardNormal));
        let mut e: Vec<f64> = ((&a + a.transpose()) * 0.5).symmetric_eigen().eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        let opts = LevelStatOptions { trim: 0.0, zero_cutoff: 0.0, bins: 20 };
        let rep = core(r_statistic(&e[size / 4..3 * size / 4], &opts))?;
        sum += rep.mean_r * rep.levels_used as f64;
        count += rep.levels_used;
    }
    Ok(sum / count as f64)
}

fn poisson_reference() -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    let levels: Vec<f64> = (0..100_000).map(|_| rng.gen::<f64>()).collect();
    let opts = LevelStatOptions { trim: 0.0, ..Default::default() };
    Ok(core(r_statistic(&levels, &opts))?.mean_r)
}

fn level_statistics() -> Check {
    let start = Instant::now();
    let goe = goe_reference()?;
    let poisson = poisson_reference()?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let text = pxp(&[
        "levelstats", "--n", "20", "--k", "0", "--parity", "even", "--trim", "0.05",
        "--zero-cutoff", "1e-10", "--out-dir", dir.path().to_str().unwrap(),
    ])?;
    let s: LevelStatsSummary = serde_json::from_str(text.trim()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let summary = format!(
        "mean_r = {:.4} over {} levels; GOE ref {goe:.4}, Poisson ref {poisson:.4}",
        s.mean_r, s.levels_used
    );
    ensure((s.mean_r - goe).abs() <= 0.05, || format!("{summary}: not within 0.05 of GOE"))?;
    ensure((s.mean_r - poisson).abs() >= 0.09, || format!("{summary}: within 0.09 of Poisson"))?;
    ensure(s.levels_used >= 150, || format!("{summary}: too few levels"))?;
    within(elapsed, Duration::from_secs(600))?;
    Ok(summary)
}

fn eigensolver_contract() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst: (f64, f64) = (0.0, 0.0);
    for i in 0..100 {
        let n = 4 * (i + 1);
        let mut a = DenseMatrix::zeros(n);
        for r in 0..n {
            for c in 0..=r {
                let v: f64 = rng.sample(StandardNormal);
                a[(r, c)] = v;
                a[(c, r)] = v;
            }
        }
        let s = core(eigensolve_symmetric(&a))?;
        let (res, ortho) = contract_defects(&a, &s.eigenvalues, s.eigenvectors.as_ref().unwrap());
        ensure(res <= 1e-10 && ortho <= 1e-10, || format!("{n}x{n}: residual {res:e}, ortho {ortho:e}"))?;
        worst = (worst.0.max(res), worst.1.max(ortho));
    }
    let spec = core(LatticeSpec::periodic(20))?;
    let block = core(resolve_symmetry(&spec, &Signature::zeros(20), Some(0), Parity::Even))?;
    let s = core(eigensolve_symmetric(&block.hamiltonian()))?;
    ensure(s.residual_bound <= 1e-10 && s.orthogonality_defect <= 1e-10, || {
        format!("N=20 block: {:e} {:e}", s.residual_bound, s.orthogonality_defect)
    })?;
    let b = core(block_statistics(&spec, &Signature::zeros(20), Some(0), Parity::Even, &LevelStatOptions::default()))?;
    ensure(b.residual_bound <= 1e-10 && b.orthogonality_defect <= 1e-10, || "N=20 statistics block".into())?;
    Ok(format!(
        "100 random matrices 4..400: worst residual {:.1e}, orthogonality {:.1e}; N=20 block {:.1e}, {:.1e}",
        worst.0, worst.1, s.residual_bound, s.orthogonality_defect
    ))
}

fn neumann_exhibit() -> Check {
    for n in 3..=4 {
        for target in 1..=n {
            let text = pxp(&["neumann", "--n", &n.to_string(), "--target", &target.to_string(), "--seed", "7"])?;
            let r: NeumannReport = serde_json::from_str(text.trim()).map_err(|e| e.to_string())?;
            ensure(r.d == 1 << n && r.term_count == 1 << n, || format!("n={n}: d = {}", r.d))?;
            ensure(r.max_reconstruction_error <= 1e-8, || {
                format!("n={n} target {target}: error {:e}", r.max_reconstruction_error)
            })?;
        }
    }
    ensure(
        matches!(neumann_interpolate(&[0.0, 0.0, 1.0], &[1.0, 2.0, 3.0]), Err(Error::DegenerateBase { .. })),
        || "degenerate base accepted".into(),
    )?;
    Ok("N = 3, 4: d = 2^N terms, error <= 1e-8; degenerate base rejected".into())
}

fn cut_factorization() -> Check {
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for n in [8, 10, 12] {
        let spec = core(LatticeSpec::periodic(n))?;
        for bits in attainable_signatures(&spec) {
            if bits == 0 {
                continue;
            }
            let s = core(Signature::new(bits, n))?;
            let rep = core(cut_factorization_check(&spec, &s))?;
            ensure(rep.passed, || format!("n={n} {s}: deviation {:e}", rep.max_deviation))?;
            worst = worst.max(rep.max_deviation);
            checked += 1;
        }
    }
    Ok(format!("{checked} signatures for N = 8, 10, 12, worst deviation {worst:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("sector table for three sites", table_regression),
        ("conservation suite", conservation_suite),
        ("relation recovery", relation_recovery),
        ("triviality classifier", triviality_classifier),
        ("maximal independent sets", maximal_sets),
        ("weak independence", weak_independence),
        ("counting cross-check", counting_cross_check),
        ("level statistics", level_statistics),
        ("eigensolver contract", eigensolver_contract),
        ("interpolation exhibit", neumann_exhibit),
        ("chain-cutting factorization", cut_factorization),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
