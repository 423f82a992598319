//! Element stacks applied to a mode, with per-step sphere bookkeeping.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::elements::{
    jones_circular, jones_hwp, jones_qwp, lift, spatial_flip, spatial_rotation, symmetry_check,
    Handedness, SymmetryClass, Transform4, DEFAULT_PHI_SAMPLES, DEFAULT_SYMMETRY_TOL,
};
use crate::hps::{superselect, SpherePoint};
use crate::modes::{Coeff4, Sign};
use crate::{Error, Result, C64};

/// Components lighter than this carry no sphere point.
pub const POINT_WEIGHT_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Element {
    Hwp(f64),
    Qwp(f64),
    CircPol(Handedness),
    SpatialRot(f64),
    SpatialFlip(C64, C64),
}

impl Element {
    pub fn transform(&self) -> Transform4 {
        let m = match *self {
            Element::Hwp(a) => jones_hwp(a),
            Element::Qwp(a) => jones_qwp(a),
            Element::CircPol(h) => jones_circular(h),
            Element::SpatialRot(phi) => spatial_rotation(phi),
            Element::SpatialFlip(m1, m2) => spatial_flip(m1, m2),
        };
        let mut t = lift(&m);
        t.provenance = self.to_string();
        t
    }

    /// The same element with its angle replaced, for angle-carrying elements.
    pub fn with_angle(&self, angle: f64) -> Result<Element> {
        match self {
            Element::Hwp(_) => Ok(Element::Hwp(angle)),
            Element::Qwp(_) => Ok(Element::Qwp(angle)),
            Element::SpatialRot(_) => Ok(Element::SpatialRot(angle)),
            other => Err(Error::InvalidArgument(format!("element '{other}' has no angle to sweep"))),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Hwp(a) => write!(f, "hwp:{a}"),
            Element::Qwp(a) => write!(f, "qwp:{a}"),
            Element::CircPol(Handedness::Left) => f.write_str("circpol:L"),
            Element::CircPol(Handedness::Right) => f.write_str("circpol:R"),
            Element::SpatialRot(phi) => write!(f, "spatial-rot:{phi}"),
            Element::SpatialFlip(m1, m2) if m1.im == 0.0 && m2.im == 0.0 => {
                write!(f, "spatial-flip:{},{}", m1.re, m2.re)
            }
            Element::SpatialFlip(m1, m2) => {
                write!(f, "spatial-flip:{},{},{},{}", m1.re, m1.im, m2.re, m2.im)
            }
        }
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("invalid {what} '{s}'")))?;
    if !v.is_finite() {
        return Err(Error::InvalidArgument(format!("{what} must be finite")));
    }
    Ok(v)
}

/// Accepts `hwp:A`, `qwp:A`, `circpol:L|R`, `spatial-rot:PHI`,
/// `spatial-flip:M1,M2` (real) or `spatial-flip:RE1,IM1,RE2,IM2`.
impl FromStr for Element {
    type Err = Error;
    fn from_str(s: &str) -> Result<Element> {
        let (kind, arg) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("element '{s}' needs the form kind:args")))?;
        match kind.trim().to_ascii_lowercase().as_str() {
            "hwp" => Ok(Element::Hwp(parse_f64(arg, "angle")?)),
            "qwp" => Ok(Element::Qwp(parse_f64(arg, "angle")?)),
            "circpol" => match arg.trim() {
                "L" | "l" => Ok(Element::CircPol(Handedness::Left)),
                "R" | "r" => Ok(Element::CircPol(Handedness::Right)),
                other => Err(Error::InvalidArgument(format!("circpol takes L or R, got '{other}'"))),
            },
            "spatial-rot" => Ok(Element::SpatialRot(parse_f64(arg, "angle")?)),
            "spatial-flip" => {
                let v = arg.split(',').map(|p| parse_f64(p, "flip parameter")).collect::<Result<Vec<_>>>()?;
                match v.as_slice() {
                    [m1, m2] => Ok(Element::SpatialFlip(C64::new(*m1, 0.0), C64::new(*m2, 0.0))),
                    [a, b, c, d] => Ok(Element::SpatialFlip(C64::new(*a, *b), C64::new(*c, *d))),
                    _ => Err(Error::InvalidArgument("spatial-flip takes 2 or 4 numbers".into())),
                }
            }
            other => Err(Error::InvalidArgument(format!("unknown element kind '{other}'"))),
        }
    }
}

pub fn parse_elements(list: &str) -> Result<Vec<Element>> {
    list.split(';').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateSummary {
    pub coeff: Coeff4,
    pub weight_plus: f64,
    pub weight_minus: f64,
    pub point_plus: Option<SpherePoint>,
    pub point_minus: Option<SpherePoint>,
}

pub fn summarize(c: &Coeff4) -> Result<StateSummary> {
    let sel = superselect(c);
    let point = |s: Sign| -> Result<Option<SpherePoint>> {
        let comp = sel.component(s);
        if comp.weight > POINT_WEIGHT_FLOOR {
            Ok(Some(comp.point(s)?))
        } else {
            Ok(None)
        }
    };
    Ok(StateSummary {
        coeff: *c,
        weight_plus: sel.plus.weight,
        weight_minus: sel.minus.weight,
        point_plus: point(Sign::Plus)?,
        point_minus: point(Sign::Minus)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Step {
    pub index: usize,
    pub element: Element,
    pub class: SymmetryClass,
    pub state: StateSummary,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub input: StateSummary,
    pub steps: Vec<Step>,
}

fn warnings_for(index: usize, element: &Element, class: SymmetryClass) -> Vec<String> {
    match class {
        SymmetryClass::Breaks => vec![format!(
            "step {index} ({element}): breaks the rotation symmetry, no allowed sphere transformation"
        )],
        SymmetryClass::SwapsSpheres => vec![format!(
            "step {index} ({element}): exchanges the two spheres, outside the in-sphere rules"
        )],
        _ => Vec::new(),
    }
}

pub fn run(elements: &[Element], input: &Coeff4) -> Result<Trajectory> {
    let mut state = *input;
    let mut steps = Vec::with_capacity(elements.len());
    for (index, e) in elements.iter().enumerate() {
        let t = e.transform();
        let class = symmetry_check(&t, &DEFAULT_PHI_SAMPLES, DEFAULT_SYMMETRY_TOL)?.class;
        state = t.apply(&state);
        steps.push(Step {
            index,
            element: *e,
            class,
            state: summarize(&state)?,
            warnings: warnings_for(index, e, class),
        });
    }
    Ok(Trajectory { input: summarize(input)?, steps })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub angle: f64,
    pub state: StateSummary,
}

/// Runs the stack with the last element's angle set to `pi j / samples`, `j = 0..=samples`.
pub fn sweep_last(elements: &[Element], input: &Coeff4, samples: usize) -> Result<Vec<SweepPoint>> {
    let (last, head) = elements
        .split_last()
        .ok_or_else(|| Error::InvalidArgument("sweep needs at least one element".into()))?;
    if samples == 0 {
        return Err(Error::InvalidArgument("sweep needs at least one sample".into()));
    }
    let prefix = head.iter().fold(Transform4::identity(), |acc, e| acc.then(&e.transform()));
    let start = prefix.apply(input);
    (0..=samples)
        .map(|j| {
            let angle = PI * j as f64 / samples as f64;
            let state = last.with_angle(angle)?.transform().apply(&start);
            Ok(SweepPoint { angle, state: summarize(&state)? })
        })
        .collect()
}
