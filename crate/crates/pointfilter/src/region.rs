//! Wavenumber-region algebra and exact closed-form impulse responses.
//!
//! A region is a tree over two centred primitives (hyperbox, ball) with
//! symmetric-shift, union and set-minus nodes. The impulse response
//! `h_K(u)` is the inverse Fourier transform of the region's indicator,
//! assembled from the closed forms:
//!
//! * hyperbox `prod_j [-l_j, l_j]`: `prod_j 2 l_j sinc(2 l_j u_j)`
//! * ball of radius r: `(r/|u|)^{d/2} J_{d/2}(2 pi r |u|)`
//! * symmetric shift by s: `2 cos(2 pi s.u) h_K(u)`
//! * union: `h_A + h_B - h_{A inter B}`
//! * set minus: `h_A - h_{A inter B}`
//!
//! The union/set-minus rules need the intersection as a region in its own
//! right; only intersections expressible in the same algebra are accepted,
//! everything else is rejected loudly rather than silently approximated.
//! The grammar constructors below never produce a rejected tree.

use crate::error::{Error, Result};
use crate::special::{ball_impulse, ball_volume, sinc};

use std::f64::consts::PI;
use std::fmt;

/// Region of wavenumber space, closed under the algebra above.
#[derive(Debug, Clone, PartialEq)]
pub enum WavenumberRegion {
    /// Centred box `prod_j [-l_j, l_j]` (halfwidths in cycles per unit length).
    Hyperbox { halfwidths: Vec<f64> },
    /// Centred ball of the given radius.
    Ball { radius: f64, dim: usize },
    /// `(K + s) union (K - s)` with the two copies disjoint.
    SymmetricShift {
        inner: Box<WavenumberRegion>,
        shift: Vec<f64>,
    },
    Union {
        a: Box<WavenumberRegion>,
        b: Box<WavenumberRegion>,
    },
    Difference {
        a: Box<WavenumberRegion>,
        b: Box<WavenumberRegion>,
    },
}

use WavenumberRegion::*;

fn check_dim(dim: usize) -> Result<()> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        Err(Error::InvalidRegion(format!(
            "dimension must be 1, 2 or 3, got {dim}"
        )))
    }
}

impl WavenumberRegion {
    pub fn hyperbox(halfwidths: Vec<f64>) -> Result<Self> {
        check_dim(halfwidths.len())?;
        if halfwidths.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(Error::InvalidRegion(format!(
                "box halfwidths must be positive, got {halfwidths:?}"
            )));
        }
        Ok(Hyperbox { halfwidths })
    }

    pub fn ball(radius: f64, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidRegion(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Ball { radius, dim })
    }

    /// `Ball(r_out) \ Ball(r_in)`.
    pub fn annulus(r_in: f64, r_out: f64, dim: usize) -> Result<Self> {
        if !(r_in < r_out) {
            return Err(Error::InvalidRegion(format!(
                "annulus needs r_in < r_out, got {r_in} >= {r_out}"
            )));
        }
        Self::difference(Self::ball(r_out, dim)?, Self::ball(r_in, dim)?)
    }

    /// Outer box with an inner box removed.
    pub fn cutout_box(outer: Vec<f64>, inner: Vec<f64>) -> Result<Self> {
        if outer.len() != inner.len() {
            return Err(Error::DimensionMismatch {
                expected: outer.len(),
                got: inner.len(),
            });
        }
        if outer.iter().zip(&inner).any(|(o, i)| i >= o) {
            return Err(Error::InvalidRegion(
                "cutout box needs the inner box strictly inside the outer".into(),
            ));
        }
        Self::difference(Self::hyperbox(outer)?, Self::hyperbox(inner)?)
    }

    /// Symmetric shift of `inner` by `s`, valid only when the two copies
    /// `inner + s` and `inner - s` are disjoint.
    pub fn symmetric_shift(inner: WavenumberRegion, shift: Vec<f64>) -> Result<Self> {
        if shift.len() != inner.dim() {
            return Err(Error::DimensionMismatch {
                expected: inner.dim(),
                got: shift.len(),
            });
        }
        let disjoint = match &inner {
            Ball { radius, .. } => {
                let norm = shift.iter().map(|s| s * s).sum::<f64>().sqrt();
                norm > *radius
            }
            Hyperbox { halfwidths } => halfwidths
                .iter()
                .zip(&shift)
                .any(|(l, s)| s.abs() > *l),
            other => {
                // conservative bounding-box separation for compound regions
                let bbox = other.bounding_halfwidths();
                bbox.iter().zip(&shift).any(|(w, s)| s.abs() > *w)
            }
        };
        if !disjoint {
            return Err(Error::InvalidRegion(format!(
                "shifted copies overlap (or disjointness is not provable) for shift {shift:?}"
            )));
        }
        Ok(SymmetricShift {
            inner: Box::new(inner),
            shift,
        })
    }

    pub fn union(a: WavenumberRegion, b: WavenumberRegion) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        Ok(Union {
            a: Box::new(a),
            b: Box::new(b),
        })
    }

    pub fn difference(a: WavenumberRegion, b: WavenumberRegion) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        Ok(Difference {
            a: Box::new(a),
            b: Box::new(b),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Hyperbox { halfwidths } => halfwidths.len(),
            Ball { dim, .. } => *dim,
            SymmetricShift { inner, .. } => inner.dim(),
            Union { a, .. } | Difference { a, .. } => a.dim(),
        }
    }

    /// Halfwidths of the smallest centred box containing the region.
    pub fn bounding_halfwidths(&self) -> Vec<f64> {
        match self {
            Hyperbox { halfwidths } => halfwidths.clone(),
            Ball { radius, dim } => vec![*radius; *dim],
            SymmetricShift { inner, shift } => inner
                .bounding_halfwidths()
                .iter()
                .zip(shift)
                .map(|(w, s)| w + s.abs())
                .collect(),
            Union { a, b } => a
                .bounding_halfwidths()
                .iter()
                .zip(b.bounding_halfwidths())
                .map(|(x, y)| x.max(y))
                .collect(),
            Difference { a, .. } => a.bounding_halfwidths(),
        }
    }

    /// Smallest positive wavenumber scale among the primitives; sets the
    /// decay scale of the impulse response envelope.
    pub fn min_scale(&self) -> f64 {
        match self {
            Hyperbox { halfwidths } => halfwidths.iter().cloned().fold(f64::INFINITY, f64::min),
            Ball { radius, .. } => *radius,
            SymmetricShift { inner, .. } => inner.min_scale(),
            Union { a, b } | Difference { a, b } => a.min_scale().min(b.min_scale()),
        }
    }

    /// Set membership; boundary points count as inside each primitive,
    /// union is or, set minus is and-not.
    pub fn contains(&self, k: &[f64]) -> bool {
        debug_assert_eq!(k.len(), self.dim());
        match self {
            Hyperbox { halfwidths } => k
                .iter()
                .zip(halfwidths)
                .all(|(x, l)| x.abs() <= *l),
            Ball { radius, .. } => {
                k.iter().map(|x| x * x).sum::<f64>() <= radius * radius
            }
            SymmetricShift { inner, shift } => {
                let plus: Vec<f64> = k.iter().zip(shift).map(|(x, s)| x - s).collect();
                let minus: Vec<f64> = k.iter().zip(shift).map(|(x, s)| x + s).collect();
                inner.contains(&plus) || inner.contains(&minus)
            }
            Union { a, b } => a.contains(k) || b.contains(k),
            Difference { a, b } => a.contains(k) && !b.contains(k),
        }
    }

    /// Transfer function of the ideal filter: 1 inside, 0 outside.
    pub fn transfer_indicator(&self, k: &[f64]) -> Result<u8> {
        if k.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: k.len(),
            });
        }
        Ok(self.contains(k) as u8)
    }

    /// Lebesgue measure of the region. Exact via the set algebra where the
    /// intersections are representable, with a deterministic midpoint
    /// quadrature fallback over the intersection otherwise.
    pub fn measure(&self) -> f64 {
        match self {
            Hyperbox { halfwidths } => halfwidths.iter().map(|l| 2.0 * l).product(),
            Ball { radius, dim } => ball_volume(*radius, *dim),
            SymmetricShift { inner, .. } => 2.0 * inner.measure(),
            Union { a, b } => a.measure() + b.measure() - intersection_measure(a, b),
            Difference { a, b } => a.measure() - intersection_measure(a, b),
        }
    }

    /// Impulse response `h_K(u)`, the inverse Fourier transform of the
    /// indicator of K. Returns the measure exactly at (and near) u = 0.
    pub fn impulse_response(&self, u: &[f64]) -> Result<f64> {
        ImpulseResponse::new(self)?.eval_checked(u)
    }
}

/// Measure of `a inter b`: exact when the intersection is representable,
/// midpoint quadrature over the joint bounding box otherwise.
fn intersection_measure(a: &WavenumberRegion, b: &WavenumberRegion) -> f64 {
    match intersection(a, b) {
        Ok(None) => 0.0,
        Ok(Some(region)) => region.measure(),
        Err(_) => {
            let wa = a.bounding_halfwidths();
            let wb = b.bounding_halfwidths();
            let half: Vec<f64> = wa.iter().zip(&wb).map(|(x, y)| x.min(*y)).collect();
            let d = half.len();
            let n: usize = if d == 3 { 96 } else { 512 };
            let steps: Vec<f64> = half.iter().map(|w| 2.0 * w / n as f64).collect();
            let cell: f64 = steps.iter().product();
            let mut count = 0usize;
            let total: usize = n.pow(d as u32);
            let mut k = vec![0.0; d];
            for flat in 0..total {
                let mut rem = flat;
                for j in (0..d).rev() {
                    let idx = rem % n;
                    rem /= n;
                    k[j] = -half[j] + (idx as f64 + 0.5) * steps[j];
                }
                if a.contains(&k) && b.contains(&k) {
                    count += 1;
                }
            }
            count as f64 * cell
        }
    }
}

/// Intersection of two regions as a region, `Ok(None)` when provably
/// empty, `UnsupportedRegion` when not expressible in the algebra.
fn intersection(
    a: &WavenumberRegion,
    b: &WavenumberRegion,
) -> Result<Option<WavenumberRegion>> {
    match (a, b) {
        (Hyperbox { halfwidths: la }, Hyperbox { halfwidths: lb }) => {
            let l: Vec<f64> = la.iter().zip(lb).map(|(x, y)| x.min(*y)).collect();
            Ok(Some(Hyperbox { halfwidths: l }))
        }
        (Ball { radius: ra, dim }, Ball { radius: rb, .. }) => Ok(Some(Ball {
            radius: ra.min(*rb),
            dim: *dim,
        })),
        (Ball { radius, dim }, Hyperbox { halfwidths })
        | (Hyperbox { halfwidths }, Ball { radius, dim }) => {
            let min_l = halfwidths.iter().cloned().fold(f64::INFINITY, f64::min);
            let corner = halfwidths.iter().map(|l| l * l).sum::<f64>().sqrt();
            if *radius <= min_l {
                Ok(Some(Ball {
                    radius: *radius,
                    dim: *dim,
                }))
            } else if corner <= *radius {
                Ok(Some(Hyperbox {
                    halfwidths: halfwidths.clone(),
                }))
            } else {
                Err(Error::UnsupportedRegion(
                    "ball/box intersection with neither containing the other".into(),
                ))
            }
        }
        // (X \ Y) inter C = (X inter C) \ Y
        (Difference { a: x, b: y }, c) => match intersection(x, c)? {
            None => Ok(None),
            Some(xc) => Ok(Some(Difference {
                a: Box::new(xc),
                b: y.clone(),
            })),
        },
        (c, Difference { a: x, b: y }) => match intersection(c, x)? {
            None => Ok(None),
            Some(cx) => Ok(Some(Difference {
                a: Box::new(cx),
                b: y.clone(),
            })),
        },
        // (X u Y) inter C = (X inter C) u (Y inter C)
        (Union { a: x, b: y }, c) | (c, Union { a: x, b: y }) => {
            match (intersection(x, c)?, intersection(y, c)?) {
                (None, None) => Ok(None),
                (Some(r), None) | (None, Some(r)) => Ok(Some(r)),
                (Some(r), Some(s)) => Ok(Some(Union {
                    a: Box::new(r),
                    b: Box::new(s),
                })),
            }
        }
        (SymmetricShift { inner, shift }, c) | (c, SymmetricShift { inner, shift }) => {
            // each shifted copy occupies shift +- bounding box of inner
            let wi = inner.bounding_halfwidths();
            let wc = c.bounding_halfwidths();
            let separated = shift
                .iter()
                .zip(wi.iter().zip(&wc))
                .any(|(s, (a, b))| s.abs() > a + b);
            if separated {
                Ok(None)
            } else {
                Err(Error::UnsupportedRegion(
                    "intersection with a shifted region is not representable".into(),
                ))
            }
        }
    }
}

/// A flattened, precompiled impulse response: a signed sum of primitive
/// terms, each with an optional product of shift cosine factors. Building
/// the evaluator surfaces unsupported intersections once, so grid sweeps
/// can evaluate without re-walking the tree.
pub struct ImpulseResponse {
    terms: Vec<Term>,
    measure: f64,
    dim: usize,
}

struct Term {
    sign: f64,
    /// shift vectors contributing a `2 cos(2 pi s.u)` factor each
    shifts: Vec<Vec<f64>>,
    primitive: Primitive,
}

enum Primitive {
    Box(Vec<f64>),
    Ball { radius: f64, dim: usize },
}

impl ImpulseResponse {
    pub fn new(region: &WavenumberRegion) -> Result<Self> {
        let mut terms = Vec::new();
        flatten(region, 1.0, &[], &mut terms)?;
        Ok(Self {
            terms,
            measure: region.measure(),
            dim: region.dim(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `h_K(u)`; near u = 0 the analytic limit (the measure) is returned.
    pub fn eval(&self, u: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), self.dim);
        if u.iter().map(|x| x * x).sum::<f64>().sqrt() < 1e-10 {
            return self.measure;
        }
        let mut acc = 0.0;
        for term in &self.terms {
            let mut v = term.sign;
            for s in &term.shifts {
                let phase: f64 = s.iter().zip(u).map(|(si, ui)| si * ui).sum();
                v *= 2.0 * (2.0 * PI * phase).cos();
            }
            v *= match &term.primitive {
                Primitive::Box(halfwidths) => halfwidths
                    .iter()
                    .zip(u)
                    .map(|(l, ui)| 2.0 * l * sinc(2.0 * l * ui))
                    .product::<f64>(),
                Primitive::Ball { radius, dim } => {
                    let dist = u.iter().map(|x| x * x).sum::<f64>().sqrt();
                    ball_impulse(*radius, dist, *dim)
                }
            };
            acc += v;
        }
        acc
    }

    fn eval_checked(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: u.len(),
            });
        }
        Ok(self.eval(u))
    }
}

fn flatten(
    region: &WavenumberRegion,
    sign: f64,
    shifts: &[Vec<f64>],
    out: &mut Vec<Term>,
) -> Result<()> {
    match region {
        Hyperbox { halfwidths } => {
            out.push(Term {
                sign,
                shifts: shifts.to_vec(),
                primitive: Primitive::Box(halfwidths.clone()),
            });
            Ok(())
        }
        Ball { radius, dim } => {
            out.push(Term {
                sign,
                shifts: shifts.to_vec(),
                primitive: Primitive::Ball {
                    radius: *radius,
                    dim: *dim,
                },
            });
            Ok(())
        }
        SymmetricShift { inner, shift } => {
            let mut with_shift = shifts.to_vec();
            with_shift.push(shift.clone());
            flatten(inner, sign, &with_shift, out)
        }
        Union { a, b } => {
            flatten(a, sign, shifts, out)?;
            flatten(b, sign, shifts, out)?;
            if let Some(inter) = intersection(a, b)? {
                flatten(&inter, -sign, shifts, out)?;
            }
            Ok(())
        }
        Difference { a, b } => {
            flatten(a, sign, shifts, out)?;
            if let Some(inter) = intersection(a, b)? {
                flatten(&inter, -sign, shifts, out)?;
            }
            Ok(())
        }
    }
}

/// Parses the region grammar: `box:l1,l2[,l3]`, `ball:r`,
/// `annulus:rin,rout`, `shiftbox:l1,l2[,l3]@s1,s2[,s3]`,
/// `shiftball:r@s1,s2[,s3]`. The ambient dimension comes from the caller
/// (balls and annuli do not encode it).
pub fn parse_region(text: &str, dim: usize) -> Result<WavenumberRegion> {
    check_dim(dim).map_err(|_| Error::Grammar(format!("bad dimension {dim}")))?;
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| Error::Grammar(format!("expected shape:params, got {text:?}")))?;
    let parse_list = |s: &str, expected: usize, what: &str| -> Result<Vec<f64>> {
        let vals: Vec<f64> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Grammar(format!("bad number {t:?} in {text:?}")))
            })
            .collect::<Result<_>>()?;
        if vals.len() != expected {
            return Err(Error::Grammar(format!(
                "{what} needs {expected} values for dimension {dim}, got {}",
                vals.len()
            )));
        }
        Ok(vals)
    };
    match kind {
        "box" => WavenumberRegion::hyperbox(parse_list(rest, dim, "box")?),
        "ball" => {
            let vals = parse_list(rest, 1, "ball")?;
            WavenumberRegion::ball(vals[0], dim)
        }
        "annulus" => {
            let vals = parse_list(rest, 2, "annulus")?;
            WavenumberRegion::annulus(vals[0], vals[1], dim)
        }
        "shiftbox" | "shiftball" => {
            let (inner_text, shift_text) = rest
                .split_once('@')
                .ok_or_else(|| Error::Grammar(format!("{kind} needs params@shift in {text:?}")))?;
            let inner = if kind == "shiftbox" {
                WavenumberRegion::hyperbox(parse_list(inner_text, dim, "shiftbox")?)?
            } else {
                let vals = parse_list(inner_text, 1, "shiftball")?;
                WavenumberRegion::ball(vals[0], dim)?
            };
            let shift = parse_list(shift_text, dim, "shift")?;
            WavenumberRegion::symmetric_shift(inner, shift)
        }
        other => Err(Error::Grammar(format!("unknown shape {other:?}"))),
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for WavenumberRegion {
    /// Emits the grammar form where one exists, a structural form otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hyperbox { halfwidths } => write!(f, "box:{}", join(halfwidths)),
            Ball { radius, .. } => write!(f, "ball:{radius}"),
            Difference { a, b } => match (a.as_ref(), b.as_ref()) {
                (Ball { radius: ro, .. }, Ball { radius: ri, .. }) if ri < ro => {
                    write!(f, "annulus:{ri},{ro}")
                }
                _ => write!(f, "diff({a},{b})"),
            },
            SymmetricShift { inner, shift } => match inner.as_ref() {
                Hyperbox { halfwidths } => {
                    write!(f, "shiftbox:{}@{}", join(halfwidths), join(shift))
                }
                Ball { radius, .. } => write!(f, "shiftball:{radius}@{}", join(shift)),
                _ => write!(f, "shift({inner}@{})", join(shift)),
            },
            Union { a, b } => write!(f, "union({a},{b})"),
        }
    }
}
