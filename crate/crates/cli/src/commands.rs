use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use hods_core::discrepancy::{
    convergence_study, format_float, l2_exact, lq_estimate, lq_estimate_general,
    propagated_bound, qmc_integrate, thm2_bound, McSettings, StudyRow, StudySource,
    TestFunction,
};
use hods_core::duality::{
    dual_set_basis, minimal_weights, mu1, mu2, t_from_weights, verify_order2_net, Order,
};
use hods_core::genmat::{niederreiter_t_prime, order2_t_bound};
use hods_core::points::{
    digital_shift, net_points, propagated_construction, propagation_level, Provenance,
};
use hods_core::walsh::{character_sum, delta_walsh_coefficient, wal, walsh_inner_product};
use hods_core::{
    Budget, DyadicValue, Error, GeneratingMatrixSet, PointSet, Result, ShiftVector,
};

use crate::args::*;

/// What a subcommand produced.
pub struct Outcome {
    pub text: String,
    /// `false` when a check failed (exit code 1).
    pub passed: bool,
    pub seed: Option<u64>,
    pub summary: Value,
    pub notes: Vec<String>,
}

impl Outcome {
    fn ok(text: String, summary: Value) -> Self {
        Outcome { text, passed: true, seed: None, summary, notes: vec![] }
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

fn matrix_set(a: &MatrixSetArgs, rows: Option<usize>) -> Result<GeneratingMatrixSet> {
    let rows = rows.unwrap_or(a.order as usize * a.m);
    match (a.zero_matrices, a.order) {
        (true, _) => GeneratingMatrixSet::zeros(a.s, rows, a.m),
        (false, 1) => GeneratingMatrixSet::niederreiter(a.s, rows, a.m),
        (false, _) => GeneratingMatrixSet::order2(a.s, rows, a.m),
    }
}

fn order(a: &MatrixSetArgs) -> Result<Order> {
    Order::from_number(a.order)
}

pub fn point_set(a: &PointArgs) -> Result<PointSet> {
    match (a.m, a.n_points) {
        (Some(m), _) => {
            let m = m as usize;
            let w = a.precision.map_or(a.order as usize * m, |w| w as usize);
            let g = if a.order == 1 {
                GeneratingMatrixSet::niederreiter(a.s, w, m)?
            } else {
                GeneratingMatrixSet::order2(a.s, w, m)?
            };
            net_points(&g)
        }
        (None, Some(n)) if a.order == 2 => {
            if a.precision.is_some() {
                return invalid("--precision is fixed by the propagation rule for --n-points");
            }
            propagated_construction(a.s, n)
        }
        (None, Some(n)) => {
            if n == 0 {
                return invalid("--n-points must be positive");
            }
            let m = propagation_level(n) as usize;
            let w = a.precision.map_or(m, |w| w as usize);
            let net = net_points(&GeneratingMatrixSet::niederreiter(a.s, w, m)?)?;
            let prefix = net.numerators()[..n as usize * a.s].to_vec();
            PointSet::from_numerators(a.s, net.precision(), prefix, Provenance::Sequence)
        }
        (None, None) => invalid("either --m or --n-points is required"),
    }
}

pub fn gen(a: &GenArgs) -> Result<Outcome> {
    let mut p = point_set(&a.points)?;
    if let Some(seed) = a.shift {
        let sigma = ShiftVector::random(p.dim(), p.precision(), seed)?;
        p = digital_shift(&p, &sigma)?;
    }
    let s = p.dim();
    let mut out = String::new();
    let header: Vec<String> = (1..=s).map(|j| format!("x{j}")).collect();
    match a.format {
        PointFormat::CsvDecimal => {
            writeln!(out, "{}", header.join(",")).unwrap();
            for n in 0..p.len() {
                let row: Vec<String> = (0..s).map(|j| format_float(p.value_f64(n, j))).collect();
                writeln!(out, "{}", row.join(",")).unwrap();
            }
        }
        PointFormat::CsvHex => {
            if !p.is_dyadic() {
                return invalid("csv-hex needs dyadic points; use csv-decimal for rescaled N-point sets");
            }
            writeln!(out, "{},W", header.join(",")).unwrap();
            for n in 0..p.len() {
                let row: Vec<String> = p.point(n).iter().map(|v| format!("0x{v:x}")).collect();
                writeln!(out, "{},{}", row.join(","), p.precision()).unwrap();
            }
        }
    }
    let mut o = Outcome::ok(
        out,
        json!({
            "points": p.len(),
            "dim": s,
            "precision": p.precision(),
            "provenance": format!("{:?}", p.provenance()),
            "first_axis_scale": p.first_axis_scale().map(|sc| format!("{}/{}", sc.numer, sc.denom)),
        }),
    );
    o.seed = a.shift;
    if p.precision() > 52 && a.format == PointFormat::CsvDecimal {
        o.notes.push("decimal output truncates coordinates to 52 binary digits".into());
    }
    Ok(o)
}

pub fn matrices(a: &MatrixArgs) -> Result<Outcome> {
    let g = matrix_set(&a.set, a.rows)?;
    let polys = g.underlying_polys();
    let per = polys.len() / g.s().max(1);
    let mut out = String::new();
    let mut entries = vec![];
    for j in 0..g.s() {
        let own = &polys[j * per..(j + 1) * per];
        let desc: Vec<Value> = own
            .iter()
            .map(|p| json!({ "p": p.to_string(), "e": p.degree() }))
            .collect();
        let names: Vec<String> = own.iter().map(|p| p.to_string()).collect();
        writeln!(
            out,
            "# j={} p={} rows={} cols={} kind={}",
            j + 1,
            names.join("+"),
            g.rows(),
            g.cols(),
            g.kind()
        )
        .unwrap();
        write!(out, "{}", g.matrix(j)).unwrap();
        if !out.ends_with('\n') {
            out.push('\n');
        }
        entries.push(json!({
            "j": j + 1,
            "polynomials": desc,
            "rows": g.rows(),
            "cols": g.cols(),
            "kind": g.kind().to_string(),
        }));
    }
    Ok(Outcome::ok(out, json!({ "matrices": entries })))
}

fn fmt_weight(w: Option<u32>) -> String {
    w.map_or_else(|| "inf".into(), |v| v.to_string())
}

pub fn verify(a: &VerifyArgs, budget: Budget) -> Result<Outcome> {
    let g = matrix_set(&a.set, None)?;
    let ord = order(&a.set)?;
    let bound = match ord {
        Order::One => niederreiter_t_prime(a.set.s),
        Order::Two => order2_t_bound(a.set.s),
    };
    let claimed = a.t.unwrap_or(bound);
    let w = minimal_weights(&g, budget)?;
    let t_exact = t_from_weights(w, a.set.m, ord);
    let mut passed = t_exact <= claimed;
    let mut notes = vec![];
    if ord == Order::Two {
        let by_rows = verify_order2_net(&g, claimed, budget)?;
        if by_rows != passed {
            notes.push(format!(
                "row-independence search says {by_rows}, minimal weight says {passed}"
            ));
            passed = false;
        }
    }
    let mut out = String::from("s,m,order,rho1,rho2,t_exact,t_bound,t_claimed,pass\n");
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{}",
        a.set.s,
        a.set.m,
        a.set.order,
        fmt_weight(w.rho1),
        fmt_weight(w.rho2),
        t_exact,
        bound,
        claimed,
        if passed { "pass" } else { "fail" }
    )
    .unwrap();
    Ok(Outcome {
        text: out,
        passed,
        seed: None,
        summary: json!({
            "rho1": w.rho1, "rho2": w.rho2, "t_exact": t_exact,
            "t_bound": bound, "t_claimed": claimed, "pass": passed,
        }),
        notes,
    })
}

pub fn dual(a: &DualArgs, budget: Budget) -> Result<Outcome> {
    let g = matrix_set(&a.set, None)?;
    let d = dual_set_basis(&g, budget)?;
    let w = d.minimal_weights();
    let mut out = String::new();
    let header: Vec<String> = (1..=a.set.s).map(|j| format!("k{j}")).collect();
    writeln!(out, "{},mu1,mu2", header.join(",")).unwrap();
    for k in d.elements().take(a.limit) {
        let ks: Vec<String> = k.iter().map(u64::to_string).collect();
        let (w1, w2): (u32, u32) = (k.iter().map(|&v| mu1(v)).sum(), k.iter().map(|&v| mu2(v)).sum());
        writeln!(out, "{},{w1},{w2}", ks.join(",")).unwrap();
    }
    let total = if d.dim() < 64 { Some(1u64 << d.dim()) } else { None };
    Ok(Outcome::ok(
        out,
        json!({ "kernel_dim": d.dim(), "elements": total, "rho1": w.rho1, "rho2": w.rho2 }),
    ))
}

fn cell_wal(l: u64, cell: u64, r: u32) -> i64 {
    if r == 0 {
        return 1;
    }
    wal(l, DyadicValue::new(cell, r).expect("cell index fits")) as i64
}

fn rat(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

/// `int_x^1 wal_l`, summed cell by cell at resolution `2^-mu1(l)`.
fn tail_integral(l: u64, x: DyadicValue) -> BigRational {
    let r = mu1(l);
    let cells = 1u64 << r;
    let w = x.precision();
    let scale = r.max(w);
    let num = BigInt::from(x.numerator()) << (scale - w);
    let c0 = if w >= r { x.numerator() >> (w - r) } else { x.numerator() << (r - w) };
    let mut total = rat(BigInt::zero(), BigInt::one());
    let h = rat(BigInt::one(), BigInt::one() << r);
    let end = rat((BigInt::from(c0) + 1) << (scale - r), BigInt::one() << scale);
    total += (end - rat(num, BigInt::one() << scale)) * BigInt::from(cell_wal(l, c0, r));
    for c in c0 + 1..cells {
        total += h.clone() * BigInt::from(cell_wal(l, c, r));
    }
    total
}

/// `int_0^1 theta wal_l(theta)`, summed cell by cell.
fn first_moment(l: u64) -> BigRational {
    let r = mu1(l);
    let denom = BigInt::one() << (2 * r + 1);
    (0..1u64 << r)
        .map(|c| rat(BigInt::from(cell_wal(l, c, r) * (2 * c as i64 + 1)), denom.clone()))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Walsh coefficient of the local discrepancy by direct integration per point.
fn delta_coefficient_direct(p: &PointSet, l: &[u64]) -> BigRational {
    let n = p.len();
    let mut sum = BigRational::zero();
    for i in 0..n {
        let mut prod = BigRational::one();
        for (j, &lj) in l.iter().enumerate() {
            prod *= tail_integral(lj, p.value(i, j));
        }
        sum += prod;
    }
    let volume = l.iter().fold(BigRational::one(), |a, &lj| a * first_moment(lj));
    sum / BigInt::from(n) - volume
}

fn index_vectors(s: usize, max: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = max.pow(s as u32);
    (0..total).map(move |mut c| {
        (0..s)
            .map(|_| {
                let v = c % max;
                c /= max;
                v
            })
            .collect()
    })
}

pub fn walsh(a: &WalshArgs, budget: Budget) -> Result<Outcome> {
    let mut out = String::from("index,value,expected,pass\n");
    let mut failures = 0usize;
    let mut rows = 0usize;
    let mut emit = |out: &mut String, index: String, value: String, expected: String| {
        let ok = value == expected;
        failures += usize::from(!ok);
        rows += 1;
        writeln!(out, "{index},{value},{expected},{ok}").unwrap();
    };
    let join = |k: &[u64]| k.iter().map(u64::to_string).collect::<Vec<_>>().join(";");
    match a.check {
        WalshCheck::Orthogonality => {
            for k in 0..a.max {
                for l in 0..a.max {
                    let v = walsh_inner_product(k, l)?;
                    let e = Ratio::from_integer(i64::from(k == l));
                    emit(&mut out, format!("{k};{l}"), v.to_string(), e.to_string());
                }
            }
        }
        WalshCheck::Character => {
            let g = matrix_set(&a.set, None)?;
            let d = dual_set_basis(&g, budget)?;
            for k in d.elements().take(a.limit) {
                let v = character_sum(&g, &k)?;
                emit(&mut out, join(&k), v.to_string(), "1".into());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let digits = g.rows() as u32;
            let mask = if digits >= 64 { u64::MAX } else { (1u64 << digits) - 1 };
            let mut found = 0;
            let mut tries = 0usize;
            while found < a.random {
                tries += 1;
                if tries > 1000 * a.random.max(1) {
                    return invalid("could not draw enough indices outside the dual set");
                }
                let k: Vec<u64> = (0..g.s()).map(|_| rng.random::<u64>() & mask).collect();
                if d.contains(&k) {
                    continue;
                }
                found += 1;
                let v = character_sum(&g, &k)?;
                emit(&mut out, join(&k), v.to_string(), "0".into());
            }
        }
        WalshCheck::DeltaCoeff => {
            if a.max > 64 {
                return invalid("delta-coeff direct integration limited to --max 64");
            }
            let g = matrix_set(&a.set, None)?;
            let p = net_points(&g)?;
            for l in index_vectors(g.s(), a.max) {
                let v = delta_walsh_coefficient(&p, &l)?;
                let e = delta_coefficient_direct(&p, &l);
                emit(&mut out, join(&l), v.to_string(), e.to_string());
            }
        }
    }
    Ok(Outcome {
        text: out,
        passed: failures == 0,
        seed: (a.check == WalshCheck::Character).then_some(a.seed),
        summary: json!({ "checked": rows, "failures": failures }),
        notes: vec![],
    })
}

fn is_even_integer(q: f64) -> bool {
    q.fract() == 0.0 && q >= 2.0 && (q as u64) % 2 == 0
}

pub fn disc(a: &DiscArgs) -> Result<Outcome> {
    let p = point_set(&a.points)?;
    let n = p.len() as u64;
    let s = p.dim();
    let m = a.points.m.unwrap_or_else(|| propagation_level(n));
    let kind = match (a.points.m, a.points.order) {
        (Some(_), 1) => "order1",
        (Some(_), _) => "order2",
        (None, 1) => "sequence",
        (None, _) => "propagated",
    };
    if let Some(tag) = &a.function {
        let f: TestFunction = tag.parse()?;
        let (est, err) = qmc_integrate(&p, f);
        let text = format!(
            "kind,s,m,N,function,estimate,abs_error\n{kind},{s},{m},{n},{tag},{},{}\n",
            format_float(est),
            format_float(err)
        );
        return Ok(Outcome::ok(text, json!({ "estimate": est, "abs_error": err })));
    }
    if n < 2 {
        return invalid("discrepancy bounds need N >= 2");
    }
    let mut notes = vec![];
    let (value, seed, std_error) = if a.q == 2.0 {
        (l2_exact(&p)?, None, None)
    } else if is_even_integer(a.q) {
        let e = lq_estimate(&p, a.q as u32, a.samples, a.seed)?;
        (e.estimate, Some(a.seed), Some(e.std_error))
    } else if a.allow_any_q {
        let e = lq_estimate_general(&p, a.q, a.samples, a.seed)?;
        notes.push(format!("q = {} is outside the even integers covered by the error bounds", a.q));
        (e.estimate, Some(a.seed), Some(e.std_error))
    } else {
        return invalid(format!(
            "q = {} is not an even integer; the bounds cover even q only (pass --allow-any-q to estimate anyway)",
            a.q
        ));
    };
    let bound = if kind == "propagated" {
        propagated_bound(n, s)?
    } else {
        thm2_bound(n, s, a.q)?
    };
    let row = StudyRow {
        kind: kind.into(),
        s,
        m,
        n,
        q: a.q,
        value,
        bound,
        normalized: value * n as f64 / (m as f64).powf((s as f64 - 1.0) / 2.0),
        seed,
    };
    let text = format!("{}\n{}\n", StudyRow::CSV_HEADER, row.to_csv());
    Ok(Outcome {
        text,
        passed: true,
        seed,
        summary: json!({
            "value": value, "std_error": std_error, "bound": bound,
            "within_bounds_scope": is_even_integer(a.q),
        }),
        notes,
    })
}

pub fn study(a: &StudyArgs) -> Result<Outcome> {
    if a.step == 0 || a.from > a.to {
        return invalid("study range needs --from <= --to and --step > 0");
    }
    let source = match a.source {
        Source::Order1 => StudySource::Order1,
        Source::Order2 => StudySource::Order2,
        Source::Propagated => StudySource::Propagated,
    };
    let sizes: Vec<u64> = (a.from..=a.to).step_by(a.step as usize).collect();
    let mc = a.mc_q.map(|q| McSettings { q, samples: a.samples, seed: a.seed });
    let rows = convergence_study(source, a.s, &sizes, mc)?;
    let mut text = format!("{}\n", StudyRow::CSV_HEADER);
    for r in &rows {
        writeln!(text, "{}", r.to_csv()).unwrap();
    }
    let mut o = Outcome::ok(text, json!({ "rows": rows.len() }));
    o.seed = mc.map(|m| m.seed);
    Ok(o)
}
