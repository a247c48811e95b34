//! One-off evaluations for `tanlim sample <op> [args]`.
//!
//! Vectors are written `1,-3/2,0` (an empty string is the zero vector),
//! group elements `0,-1;1,0` (rows separated by `;`, `I` for the identity),
//! and charts `SIGN:POLE`, e.g. `+:1` or `-:0,3/5,4/5`.

use crate::error::{Error, Result};
use crate::finseq::FinVec;
use crate::glinf::GlInf;
use crate::scalar::{Rational, Scalar};
use crate::tangent::{diagram_residual, th, to_intrinsic, transition_fiber};
use crate::tower::{random_sphere_point, ManifoldTower, Sign, SpherePoint, SphereTower, StereoChart};

use super::Mode;

/// `(name, argument synopsis)` of every sample operation.
pub const SAMPLE_OPS: &[(&str, &str)] = &[
    ("weak-inner", "X Y"),
    ("add", "X Y"),
    ("scale", "C X"),
    ("include", "X D"),
    ("gl-compose", "G H"),
    ("gl-inverse", "G"),
    ("gl-apply", "G X"),
    ("gl-embed", "G M"),
    ("chart-forward", "CHART X"),
    ("chart-inverse", "CHART Y"),
    ("transition", "CHART_A CHART_B Y"),
    ("transition-fiber", "CHART_A CHART_B FOOT LEVEL"),
    ("to-intrinsic", "LEVEL YBAR VBAR"),
    ("diagram-residual", "I J YBAR VBAR"),
    ("random-sphere-point", "DIM SEED"),
];

/// Evaluates one operation and renders its result.
pub fn evaluate_sample(op: &str, args: &[String], mode: Mode) -> Result<String> {
    if op == "random-sphere-point" {
        let [dim, seed] = take::<2>(op, args)?;
        let dim: usize = parse_index(dim)?;
        if dim == 0 {
            return Err(Error::ConfigInvalid("spheres start at dimension 1".into()));
        }
        let seed = seed
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("`{seed}` is not a seed")))?;
        return Ok(random_sphere_point(dim, seed).to_string());
    }
    match mode {
        Mode::Rational => evaluate::<Rational>(op, args),
        Mode::Float => evaluate::<f64>(op, args),
    }
}

fn evaluate<S: Scalar>(op: &str, args: &[String]) -> Result<String> {
    let v = |s: &str| FinVec::<S>::parse(s);
    let g = |s: &str| GlInf::<S>::parse(s);
    match op {
        "weak-inner" => {
            let [x, y] = take::<2>(op, args)?;
            Ok(v(x)?.weak_inner(&v(y)?).to_string())
        }
        "add" => {
            let [x, y] = take::<2>(op, args)?;
            Ok(v(x)?.add(&v(y)?).to_string())
        }
        "scale" => {
            let [c, x] = take::<2>(op, args)?;
            Ok(v(x)?.scale(&S::parse(c)?).to_string())
        }
        "include" => {
            let [x, d] = take::<2>(op, args)?;
            Ok(v(x)?.include(parse_index(d)?)?.to_string())
        }
        "gl-compose" => {
            let [a, b] = take::<2>(op, args)?;
            Ok(g(a)?.compose(&g(b)?).to_string())
        }
        "gl-inverse" => {
            let [a] = take::<1>(op, args)?;
            Ok(g(a)?.inverse()?.to_string())
        }
        "gl-apply" => {
            let [a, x] = take::<2>(op, args)?;
            Ok(g(a)?.apply(&v(x)?).to_string())
        }
        "gl-embed" => {
            let [a, m] = take::<2>(op, args)?;
            Ok(g(a)?.embed(parse_index(m)?)?.to_string())
        }
        "chart-forward" => {
            let [c, x] = take::<2>(op, args)?;
            Ok(parse_chart::<S>(c)?.forward(&SpherePoint::new(v(x)?)?)?.to_string())
        }
        "chart-inverse" => {
            let [c, y] = take::<2>(op, args)?;
            Ok(parse_chart::<S>(c)?.inverse(&v(y)?)?.to_string())
        }
        "transition" => {
            let [a, b, y] = take::<3>(op, args)?;
            Ok(parse_chart::<S>(a)?.transition(&parse_chart(b)?, &v(y)?)?.to_string())
        }
        "transition-fiber" => {
            let [a, b, foot, level] = take::<4>(op, args)?;
            let level = parse_index(level)?;
            let tower = SphereTower::new(level.max(2));
            let t = transition_fiber(&tower, &parse_chart(a)?, &parse_chart(b)?, &v(foot)?, level)?;
            Ok(t.to_string())
        }
        "to-intrinsic" => {
            let [level, ybar, vbar] = take::<3>(op, args)?;
            let level = parse_index(level)?;
            let tower = SphereTower::new(level.max(2));
            let chart = StereoChart::plus(SpherePoint::basis(1));
            let rep = th(&tower, &chart, level, v(ybar)?, v(vbar)?)?;
            Ok(to_intrinsic(&tower, &rep)?.to_string())
        }
        "diagram-residual" => {
            let [i, j, ybar, vbar] = take::<4>(op, args)?;
            let (i, j) = (parse_index(i)?, parse_index(j)?);
            let tower = SphereTower::new(j.max(2));
            let chart = StereoChart::plus(SpherePoint::basis(1));
            let rep = th(&tower, &chart, i, v(ybar)?, v(vbar)?)?;
            ManifoldTower::<S>::check_levels(&tower, i, j)?;
            let outcome = diagram_residual(&tower, &rep, j, crate::scalar::DEFAULT_TOL)?;
            Ok(format!(
                "{} (max residual {:e})",
                if outcome.pass { "commutes" } else { "does not commute" },
                outcome.residual.unwrap_or(0.0)
            ))
        }
        other => {
            let known: Vec<&str> = SAMPLE_OPS.iter().map(|(name, _)| *name).collect();
            Err(Error::ConfigInvalid(format!(
                "unknown operation `{other}`; known: {}",
                known.join(", ")
            )))
        }
    }
}

fn take<'a, const N: usize>(op: &str, args: &'a [String]) -> Result<[&'a str; N]> {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    refs.try_into().map_err(|_| {
        let synopsis = SAMPLE_OPS
            .iter()
            .find(|(name, _)| *name == op)
            .map_or("", |(_, s)| *s);
        Error::ConfigInvalid(format!("`{op}` takes {N} arguments: {synopsis}"))
    })
}

fn parse_index(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("`{s}` is not an index")))
}

fn parse_chart<S: Scalar>(s: &str) -> Result<StereoChart<S>> {
    let (sign, pole) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("chart `{s}` is not of the form SIGN:POLE")))?;
    let sign = match sign.trim() {
        "+" => Sign::Plus,
        "-" => Sign::Minus,
        other => return Err(Error::Parse(format!("chart sign `{other}` is not + or -"))),
    };
    Ok(StereoChart::new(SpherePoint::new(FinVec::parse(pole)?)?, sign))
}
