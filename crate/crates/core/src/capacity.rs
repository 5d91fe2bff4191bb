//! Lower bound for `c_{H_b}` from a finite list of classes, and plot output.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::io::{self, Write};

use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::json;

use crate::accum::vol;
use crate::classes::QuasiPerfect;
use crate::error::{domain, Result};
use crate::exact::{rat_int, ratio, QuadExt, Rational};
use crate::obstruct::mu_quad;
use crate::staircase::{limits, PreStaircase};

/// Which function realizes the envelope on a segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Piece {
    /// `qz/(d−mb)` of class `i`.
    Linear(usize),
    /// `p/(d−mb)` of class `i`.
    Constant(usize),
    Volume,
}

impl Piece {
    pub fn class_index(&self) -> Option<usize> {
        match self {
            Piece::Linear(i) | Piece::Constant(i) => Some(*i),
            Piece::Volume => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Endpoint,
    Center,
    Crossing,
}

impl PointKind {
    fn as_str(&self) -> &'static str {
        match self {
            PointKind::Endpoint => "endpoint",
            PointKind::Center => "center",
            PointKind::Crossing => "crossing",
        }
    }
}

/// Envelope value: either an exact obstruction value or `V` held as `V²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnvValue {
    Class { index: usize, value: QuadExt },
    Volume { square: QuadExt },
}

impl EnvValue {
    pub fn to_decimal(&self, digits: usize) -> String {
        match self {
            EnvValue::Class { value, .. } => value.to_decimal(digits),
            EnvValue::Volume { square } => sqrt_decimal(square, digits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            EnvValue::Class { value, .. } => value.to_f64(),
            EnvValue::Volume { square } => square.to_f64().sqrt(),
        }
    }

    pub fn exact_string(&self) -> String {
        match self {
            EnvValue::Class { value, .. } => value.to_string(),
            EnvValue::Volume { square } => format!("sqrt({square})"),
        }
    }
}

/// `z` with the segment `[z, next)` that starts there; the last point carries the
/// piece of the final segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Breakpoint {
    pub z: QuadExt,
    pub kind: PointKind,
    pub value: EnvValue,
    pub piece: Piece,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Envelope {
    pub b: QuadExt,
    pub classes: Vec<QuasiPerfect>,
    pub breakpoints: Vec<Breakpoint>,
}

/// Square root of a positive quadratic number as a decimal string.
fn sqrt_decimal(x: &QuadExt, digits: usize) -> String {
    let s = x.to_decimal(2 * digits + 4);
    let (int_part, frac) = s.split_once('.').unwrap_or((&s, ""));
    let n: BigInt = format!("{int_part}{frac}").parse().unwrap_or_default();
    if n.is_negative() {
        return "NaN".into();
    }
    // n ≈ x·10^{2digits+4}; √n ≈ √x·10^{digits+2}
    let r: BigInt = (n.sqrt() + 50) / 100;
    let mut t = r.to_string();
    if t.len() <= digits {
        t = format!("{}{t}", "0".repeat(digits + 1 - t.len()));
    }
    let (a, b) = t.split_at(t.len() - digits);
    if digits == 0 {
        a.to_string()
    } else {
        format!("{a}.{b}")
    }
}

struct Ctx<'a> {
    b: &'a QuadExt,
    classes: &'a [QuasiPerfect],
    dens: Vec<QuadExt>,
}

impl Ctx<'_> {
    /// Best class at `z`; ties go to the lower index.
    fn best(&self, z: &QuadExt) -> Result<Option<(usize, QuadExt)>> {
        let mut best: Option<(usize, QuadExt)> = None;
        for i in 0..self.classes.len() {
            let v = mu_quad(&self.classes[i], self.b, z)?;
            if best.as_ref().is_none_or(|(_, bv)| v.cmp_exact(bv) == Ordering::Greater) {
                best = Some((i, v));
            }
        }
        Ok(best)
    }

    fn value(&self, z: &QuadExt) -> Result<EnvValue> {
        let v = vol(self.b, z)?;
        match self.best(z)? {
            Some((index, value)) if v.cmp_with(&value)? != Ordering::Greater => Ok(EnvValue::Class { index, value }),
            _ => Ok(EnvValue::Volume { square: v.square().clone() }),
        }
    }

    fn piece(&self, z: &QuadExt) -> Result<Piece> {
        Ok(match self.value(z)? {
            EnvValue::Volume { .. } => Piece::Volume,
            EnvValue::Class { index, .. } => {
                let c = &self.classes[index];
                if z.checked_cmp(&QuadExt::from_rational(ratio(c.p(), c.q())))? == Ordering::Less {
                    Piece::Linear(index)
                } else {
                    Piece::Constant(index)
                }
            }
        })
    }
}

pub fn envelope(classes: &[QuasiPerfect], b: &QuadExt, z_lo: &Rational, z_hi: &Rational) -> Result<Envelope> {
    if z_lo >= z_hi {
        return domain(format!("empty window [{z_lo}, {z_hi}]"));
    }
    if *z_lo < Rational::from_integer(1.into()) {
        return domain(format!("window must start at z >= 1, got {z_lo}"));
    }
    let one_minus_b2 = QuadExt::one().checked_sub(&b.checked_mul(b)?)?;
    if one_minus_b2.sign() <= 0 || b.sign() < 0 {
        return domain(format!("need 0 <= b < 1, got {b}"));
    }
    let mut dens = Vec::with_capacity(classes.len());
    for c in classes {
        let den = QuadExt::from(c.d()).checked_sub(&b.scale(&rat_int(c.m())))?;
        if den.sign() <= 0 {
            return domain(format!("d - m*b <= 0 for {c}"));
        }
        dens.push(den);
    }
    let ctx = Ctx { b, classes, dens };
    let lo = QuadExt::from_rational(z_lo.clone());
    let hi = QuadExt::from_rational(z_hi.clone());
    let inside = |z: &QuadExt| -> Result<bool> {
        Ok(lo.checked_cmp(z)? == Ordering::Less && z.checked_cmp(&hi)? == Ordering::Less)
    };

    let mut cands: Vec<(QuadExt, PointKind)> = vec![(lo.clone(), PointKind::Endpoint), (hi.clone(), PointKind::Endpoint)];
    // slopes a_i = q/(d−mb), heights c_i = p/(d−mb)
    let slopes: Vec<QuadExt> = classes.iter().zip(&ctx.dens).map(|(c, den)| QuadExt::from(c.q()).checked_div(den)).collect::<Result<_>>()?;
    let heights: Vec<QuadExt> = classes.iter().zip(&ctx.dens).map(|(c, den)| QuadExt::from(c.p()).checked_div(den)).collect::<Result<_>>()?;
    for c in classes {
        let z = QuadExt::from_rational(ratio(c.p(), c.q()));
        if inside(&z)? {
            cands.push((z, PointKind::Center));
        }
    }
    for a in &slopes {
        for h in &heights {
            let z = h.checked_div(a)?;
            if inside(&z)? {
                cands.push((z, PointKind::Crossing));
            }
        }
        // a·z = √(z/(1−b²)) ⇒ z = 1/(a²(1−b²))
        let z = a.checked_mul(a)?.checked_mul(&one_minus_b2)?.recip()?;
        if inside(&z)? {
            cands.push((z, PointKind::Crossing));
        }
    }
    for h in &heights {
        // h = √(z/(1−b²)) ⇒ z = h²(1−b²)
        let z = h.checked_mul(h)?.checked_mul(&one_minus_b2)?;
        if inside(&z)? {
            cands.push((z, PointKind::Crossing));
        }
    }
    cands.sort_by(|x, y| x.0.cmp_exact(&y.0).then((x.1 as u8).cmp(&(y.1 as u8))));
    cands.dedup_by(|x, y| x.0 == y.0);

    let half = Rational::new(1.into(), 2.into());
    let mut points: Vec<Breakpoint> = Vec::new();
    for (k, (z, kind)) in cands.iter().enumerate() {
        let piece = match cands.get(k + 1) {
            Some((next, _)) => ctx.piece(&z.checked_add(next)?.scale(&half))?,
            None => points.last().map(|p| p.piece).unwrap_or(ctx.piece(z)?),
        };
        let value = ctx.value(z)?;
        let last = k + 1 == cands.len();
        if !last && *kind == PointKind::Crossing && points.last().is_some_and(|p| p.piece == piece) {
            continue;
        }
        points.push(Breakpoint { z: z.clone(), kind: *kind, value, piece });
    }
    Ok(Envelope { b: b.clone(), classes: classes.to_vec(), breakpoints: points })
}

impl Envelope {
    pub fn empty(b: QuadExt) -> Self {
        Envelope { b, classes: Vec::new(), breakpoints: Vec::new() }
    }

    pub fn segments(&self) -> usize {
        self.breakpoints.len().saturating_sub(1)
    }

    /// Exact envelope value at `z` (same field as `b`, or rational).
    pub fn value_at(&self, z: &QuadExt) -> Result<EnvValue> {
        let dens = self
            .classes
            .iter()
            .map(|c| QuadExt::from(c.d()).checked_sub(&self.b.scale(&rat_int(c.m()))))
            .collect::<Result<_>>()?;
        Ctx { b: &self.b, classes: &self.classes, dens }.value(z)
    }

    pub fn label(&self, piece: Piece) -> String {
        match piece.class_index() {
            Some(i) => self.classes[i].to_string(),
            None => "volume".into(),
        }
    }

    pub fn write_csv(&self, out: &mut dyn Write, digits: usize) -> io::Result<()> {
        writeln!(out, "z_num,z_den,kind,value_decimal,dominating_class")?;
        for bp in &self.breakpoints {
            let (num, den) = match bp.z.as_rational() {
                Some(r) => (r.numer().to_string(), r.denom().to_string()),
                None => (bp.z.to_string(), String::new()),
            };
            writeln!(out, "{num},{den},{},{},\"{}\"", bp.kind.as_str(), bp.value.to_decimal(digits), self.label(bp.piece))?;
        }
        Ok(())
    }

    pub fn to_json(&self, digits: usize) -> serde_json::Value {
        let pts: Vec<_> = self
            .breakpoints
            .iter()
            .map(|bp| {
                json!({
                    "z": bp.z.to_string(),
                    "kind": bp.kind.as_str(),
                    "value": bp.value.exact_string(),
                    "value_decimal": bp.value.to_decimal(digits),
                    "dominating": self.label(bp.piece),
                })
            })
            .collect();
        json!({
            "b": self.b.to_string(),
            "classes": self.classes.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "breakpoints": pts,
        })
    }

    pub fn write_json(&self, out: &mut dyn Write, digits: usize) -> io::Result<()> {
        let s = serde_json::to_string_pretty(&self.to_json(digits)).map_err(io::Error::other)?;
        writeln!(out, "{s}")
    }

    /// Self-contained 800×600 plot of the envelope and the volume curve.
    pub fn write_svg(&self, out: &mut dyn Write) -> io::Result<()> {
        let (w, h, pad) = (800.0, 600.0, 60.0);
        let mut svg = String::new();
        let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600">"#);
        let _ = writeln!(svg, r#"<rect width="800" height="600" fill="white"/>"#);
        if self.breakpoints.len() >= 2 {
            let z0 = self.breakpoints[0].z.to_f64();
            let z1 = self.breakpoints.last().unwrap().z.to_f64();
            let b = self.b.to_f64();
            let samples = 400;
            let zs: Vec<f64> = (0..=samples).map(|k| z0 + (z1 - z0) * k as f64 / samples as f64).collect();
            let volume: Vec<f64> = zs.iter().map(|z| (z / (1.0 - b * b)).sqrt()).collect();
            let env: Vec<f64> = zs
                .iter()
                .zip(&volume)
                .map(|(z, v)| {
                    self.classes
                        .iter()
                        .map(|c| {
                            let (p, q) = (c.p().to_string().parse::<f64>().unwrap_or(0.0), c.q().to_string().parse::<f64>().unwrap_or(1.0));
                            let den = c.d().to_string().parse::<f64>().unwrap_or(1.0) - c.m().to_string().parse::<f64>().unwrap_or(0.0) * b;
                            if *z <= p / q { q * z / den } else { p / den }
                        })
                        .fold(*v, f64::max)
                })
                .collect();
            let ymin = volume.iter().chain(&env).cloned().fold(f64::INFINITY, f64::min);
            let ymax = volume.iter().chain(&env).cloned().fold(f64::NEG_INFINITY, f64::max);
            let span = if ymax > ymin { ymax - ymin } else { 1.0 };
            let x = |z: f64| pad + (z - z0) / (z1 - z0) * (w - 2.0 * pad);
            let y = |v: f64| h - pad - (v - ymin) / span * (h - 2.0 * pad);
            let path = |vals: &[f64]| {
                zs.iter().zip(vals).map(|(z, v)| format!("{:.2},{:.2}", x(*z), y(*v))).collect::<Vec<_>>().join(" ")
            };
            let _ = writeln!(svg, r##"<line x1="{pad}" y1="{}" x2="{}" y2="{}" stroke="#000"/>"##, h - pad, w - pad, h - pad);
            let _ = writeln!(svg, r##"<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{}" stroke="#000"/>"##, h - pad);
            let _ = writeln!(svg, r##"<polyline fill="none" stroke="#888" stroke-dasharray="4 3" points="{}"/>"##, path(&volume));
            let _ = writeln!(svg, r##"<polyline fill="none" stroke="#c00" stroke-width="1.5" points="{}"/>"##, path(&env));
            let lo = &self.breakpoints[0].z;
            let hi = &self.breakpoints.last().unwrap().z;
            let _ = writeln!(svg, r#"<text x="{pad}" y="{}" font-size="12" font-family="monospace">z = {lo}</text>"#, h - pad + 20.0);
            let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="12" font-family="monospace" text-anchor="end">z = {hi}</text>"#, w - pad, h - pad + 20.0);
            let _ = writeln!(svg, r#"<text x="{pad}" y="30" font-size="12" font-family="monospace">b = {}</text>"#, self.b);
        }
        svg.push_str("</svg>\n");
        out.write_all(svg.as_bytes())
    }
}

/// A step corner `(p_κ/q_κ, p_κ/(d_κ − m_κ b))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corner {
    pub kappa: usize,
    pub z: Rational,
    pub value: QuadExt,
    /// `V_b(z)²` at the corner.
    pub volume_square: QuadExt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub envelope: Envelope,
    pub corners: Vec<Corner>,
}

/// Envelope at `b = b_∞` of the steps `κ = 1..=κ_max`.
pub fn staircase_profile(sc: &PreStaircase, kappa_max: usize) -> Result<Profile> {
    let ld = limits(sc)?;
    let b = ld.b_inf;
    let mut classes = Vec::new();
    let mut corners = Vec::new();
    for (kappa, c) in sc.steps.iter().enumerate().take(kappa_max + 1).skip(1) {
        if !c.is_geometric() || c.q().is_negative() {
            continue;
        }
        let z = ratio(c.p(), c.q());
        let value = mu_quad(c, &b, &QuadExt::from_rational(z.clone()))?;
        let volume_square = vol(&b, &QuadExt::from_rational(z.clone()))?.square().clone();
        corners.push(Corner { kappa, z, value, volume_square });
        classes.push(c.clone());
    }
    if corners.is_empty() {
        return Ok(Profile { envelope: Envelope::empty(b), corners });
    }
    let lo = corners.iter().map(|c| c.z.clone()).min().unwrap();
    let hi = corners.iter().map(|c| c.z.clone()).max().unwrap();
    let envelope = if lo < hi { envelope(&classes, &b, &lo, &hi)? } else { Envelope::empty(b) };
    Ok(Profile { envelope, corners })
}
