//! Closed contours and line integrals `∮ f dz`.
//!
//! Circles use the periodic trapezoid rule, which converges geometrically for
//! integrands analytic in an annulus around the circle. Polygons use
//! Gauss–Legendre on every edge. Node values may be computed in parallel but
//! are always accumulated in node order with a compensated sum.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{EvalError, Expr};
use crate::jet::{guard_radius, is_finite, Complex};
use crate::quad::{gauss_legendre, CompensatedSum};

pub const DEFAULT_CIRCLE_NODES: usize = 256;
pub const DEFAULT_EDGE_NODES: usize = 32;
pub const MIN_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::CounterClockwise => 1.0,
            Orientation::Clockwise => -1.0,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::CounterClockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::CounterClockwise,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ContourSpec {
    Circle {
        center: Complex,
        radius: f64,
        orientation: Orientation,
    },
    /// Closed polygon; the edge from the last vertex back to the first is implied.
    Polygon { vertices: Vec<Complex> },
    /// `(γ(t), γ'(t))` at equispaced `t` over one period of length 2π.
    Parametric { samples: Vec<(Complex, Complex)> },
}

/// A quadrature node: the point and its complex measure element `w·dz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourNode {
    pub point: Complex,
    pub dz: Complex,
}

impl ContourSpec {
    /// Counter-clockwise circle.
    pub fn circle(center: Complex, radius: f64) -> Self {
        ContourSpec::Circle {
            center,
            radius,
            orientation: Orientation::CounterClockwise,
        }
    }

    pub fn polygon(vertices: Vec<Complex>) -> Self {
        ContourSpec::Polygon { vertices }
    }

    /// Samples a periodic parametrisation `t ↦ (γ(t), γ'(t))`, `t ∈ [0, 2π)`.
    pub fn parametric<F: Fn(f64) -> (Complex, Complex)>(curve: F, n: usize) -> Self {
        let samples = (0..n)
            .map(|k| curve(2.0 * PI * k as f64 / n as f64))
            .collect();
        ContourSpec::Parametric { samples }
    }

    pub fn reversed(&self) -> Self {
        match self {
            ContourSpec::Circle {
                center,
                radius,
                orientation,
            } => ContourSpec::Circle {
                center: *center,
                radius: *radius,
                orientation: orientation.reversed(),
            },
            ContourSpec::Polygon { vertices } => {
                let mut v = vertices.clone();
                v.reverse();
                ContourSpec::Polygon { vertices: v }
            }
            ContourSpec::Parametric { samples } => {
                // t ↦ γ(−t)
                let n = samples.len();
                let samples = (0..n)
                    .map(|k| {
                        let (p, d) = samples[(n - k) % n];
                        (p, -d)
                    })
                    .collect();
                ContourSpec::Parametric { samples }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ContourSpec::Circle { center, radius, .. } => {
                if !(radius.is_finite() && *radius > 0.0) || !is_finite(*center) {
                    return Err(Error::InvalidSpec(format!(
                        "circle needs a finite center and positive radius, got r = {radius}"
                    )));
                }
            }
            ContourSpec::Polygon { .. } => {
                let v = self.polygon_vertices();
                if v.len() < 3 {
                    return Err(Error::InvalidSpec(format!(
                        "polygon does not enclose a region: {} distinct vertices (need at least 3)",
                        v.len()
                    )));
                }
                if v.iter().any(|z| !is_finite(*z)) {
                    return Err(Error::InvalidSpec("polygon vertex is not finite".into()));
                }
                for k in 0..v.len() {
                    if v[k] == v[(k + 1) % v.len()] {
                        return Err(Error::InvalidSpec(format!(
                            "polygon edge {k} has zero length"
                        )));
                    }
                }
            }
            ContourSpec::Parametric { samples } => {
                if samples.len() < MIN_NODES {
                    return Err(Error::InvalidSpec(format!(
                        "parametric contour needs at least {MIN_NODES} samples, got {}",
                        samples.len()
                    )));
                }
                if samples
                    .iter()
                    .any(|(p, d)| !is_finite(*p) || !is_finite(*d))
                {
                    return Err(Error::InvalidSpec("parametric sample is not finite".into()));
                }
            }
        }
        Ok(())
    }

    /// Polygon vertices with a repeated closing vertex removed.
    fn polygon_vertices(&self) -> Vec<Complex> {
        match self {
            ContourSpec::Polygon { vertices } => {
                let mut v = vertices.clone();
                if v.len() > 1 && v.first() == v.last() {
                    v.pop();
                }
                v
            }
            _ => Vec::new(),
        }
    }

    /// Euclidean distance from `z` to the curve (to the sampled chords for
    /// parametric contours).
    pub fn distance_to(&self, z: Complex) -> f64 {
        match self {
            ContourSpec::Circle { center, radius, .. } => ((z - center).norm() - radius).abs(),
            ContourSpec::Polygon { .. } => {
                let v = self.polygon_vertices();
                (0..v.len())
                    .map(|k| segment_distance(z, v[k], v[(k + 1) % v.len()]))
                    .fold(f64::INFINITY, f64::min)
            }
            ContourSpec::Parametric { samples } => {
                let n = samples.len();
                (0..n)
                    .map(|k| segment_distance(z, samples[k].0, samples[(k + 1) % n].0))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Parses `circle:cx,cy,r[,cw]` or `poly:x1,y1;x2,y2;...`.
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, body) = text
            .split_once(':')
            .ok_or_else(|| Error::InvalidSpec(format!("contour `{text}`: missing `kind:`")))?;
        let spec = match kind.trim() {
            "circle" => {
                let parts: Vec<&str> = body.split(',').map(str::trim).collect();
                let orientation = match parts.len() {
                    3 => Orientation::CounterClockwise,
                    4 if parts[3] == "cw" => Orientation::Clockwise,
                    4 if parts[3] == "ccw" => Orientation::CounterClockwise,
                    _ => {
                        return Err(Error::InvalidSpec(format!(
                            "contour `{text}`: expected circle:cx,cy,r[,cw]"
                        )))
                    }
                };
                let nums = parse_reals(&parts[..3], text)?;
                ContourSpec::Circle {
                    center: Complex::new(nums[0], nums[1]),
                    radius: nums[2],
                    orientation,
                }
            }
            "poly" => {
                let vertices = body
                    .split(';')
                    .filter(|s| !s.trim().is_empty())
                    .map(|pair| {
                        let xy: Vec<&str> = pair.split(',').map(str::trim).collect();
                        if xy.len() != 2 {
                            return Err(Error::InvalidSpec(format!(
                                "contour `{text}`: vertex `{pair}` is not x,y"
                            )));
                        }
                        let n = parse_reals(&xy, text)?;
                        Ok(Complex::new(n[0], n[1]))
                    })
                    .collect::<Result<Vec<_>>>()?;
                ContourSpec::Polygon { vertices }
            }
            other => {
                return Err(Error::InvalidSpec(format!(
                    "unknown contour kind `{other}` (expected circle or poly)"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for ContourSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContourSpec::Circle {
                center,
                radius,
                orientation,
            } => {
                write!(f, "circle:{},{},{}", center.re, center.im, radius)?;
                if *orientation == Orientation::Clockwise {
                    f.write_str(",cw")?;
                }
                Ok(())
            }
            ContourSpec::Polygon { vertices } => {
                f.write_str("poly:")?;
                for (k, v) in vertices.iter().enumerate() {
                    if k > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{},{}", v.re, v.im)?;
                }
                Ok(())
            }
            ContourSpec::Parametric { samples } => write!(f, "parametric:{}", samples.len()),
        }
    }
}

pub(crate) fn parse_reals(parts: &[&str], context: &str) -> Result<Vec<f64>> {
    parts
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::InvalidSpec(format!("`{context}`: `{s}` is not a number")))
        })
        .collect()
}

fn segment_distance(z: Complex, a: Complex, b: Complex) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

/// Quadrature nodes realising `∮ dz`. For polygons `n` is the per-edge count;
/// parametric contours use their own samples and ignore `n`.
pub fn sample_contour(c: &ContourSpec, n: usize) -> Result<Vec<ContourNode>> {
    c.validate()?;
    if n < MIN_NODES {
        return Err(Error::InvalidSpec(format!(
            "node count {n} is below the minimum of {MIN_NODES}"
        )));
    }
    Ok(match c {
        ContourSpec::Circle {
            center,
            radius,
            orientation,
        } => {
            // Same nodes for both orientations so that reversal negates exactly.
            let h = 2.0 * PI / n as f64 * orientation.sign();
            (0..n)
                .map(|k| {
                    let e = Complex::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
                    ContourNode {
                        point: center + e * *radius,
                        dz: Complex::new(0.0, *radius * h) * e,
                    }
                })
                .collect()
        }
        ContourSpec::Polygon { .. } => {
            let v = c.polygon_vertices();
            let (x, w) = gauss_legendre(n);
            let mut nodes = Vec::with_capacity(v.len() * n);
            for k in 0..v.len() {
                let (a, b) = (v[k], v[(k + 1) % v.len()]);
                let half = (b - a) * 0.5;
                let mid = (a + b) * 0.5;
                for (t, wt) in x.iter().zip(&w) {
                    nodes.push(ContourNode {
                        point: mid + half * *t,
                        dz: half * *wt,
                    });
                }
            }
            nodes
        }
        ContourSpec::Parametric { samples } => {
            let h = 2.0 * PI / samples.len() as f64;
            samples
                .iter()
                .map(|&(point, d)| ContourNode { point, dz: d * h })
                .collect()
        }
    })
}

/// `∮ f dz` for a pointwise function. Any failing node aborts the integral.
pub fn integrate_contour<F>(c: &ContourSpec, n: usize, f: F) -> Result<Complex>
where
    F: Fn(Complex) -> Result<Complex, EvalError> + Sync,
{
    let nodes = sample_contour(c, n)?;
    integrate_nodes(&nodes, f)
}

pub(crate) fn integrate_nodes<F>(nodes: &[ContourNode], f: F) -> Result<Complex>
where
    F: Fn(Complex) -> Result<Complex, EvalError> + Sync,
{
    let terms = nodes
        .par_iter()
        .enumerate()
        .map(|(index, node)| {
            f(node.point)
                .map(|v| v * node.dz)
                .map_err(|source| Error::NodeEvaluation {
                    index,
                    point: node.point,
                    source,
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(terms.into_iter().collect::<CompensatedSum>().total())
}

/// `∮_c f dz` with `f` given as an expression.
pub fn line_integral(f: &Expr, c: &ContourSpec, n: usize) -> Result<Complex> {
    integrate_contour(c, n, |z| f.eval(z))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winding {
    pub number: i64,
    /// Distance of `(1/2πi)∮ dζ/(ζ−z)` from the reported integer.
    pub residual: f64,
}

/// Winding number of `c` about `z`.
pub fn winding_number(c: &ContourSpec, z: Complex) -> Result<Winding> {
    c.validate()?;
    let distance = c.distance_to(z);
    if distance <= guard_radius(z) {
        return Err(Error::PointOnContour { point: z, distance });
    }
    let integral = match c {
        ContourSpec::Circle {
            center,
            radius,
            orientation,
        } => {
            // trapezoid error ~ q^n with q the annulus ratio; pick n for q^n < 1e-17
            let q = {
                let d = (z - center).norm();
                if d < *radius {
                    d / radius
                } else {
                    radius / d
                }
            };
            let n = if q <= 0.0 {
                DEFAULT_CIRCLE_NODES
            } else {
                ((40.0 / -q.ln()).ceil() as usize).clamp(DEFAULT_CIRCLE_NODES, 1 << 22)
            };
            let ccw = ContourSpec::circle(*center, *radius);
            integrate_contour(&ccw, n, |zeta| Ok((zeta - z).inv()))? * orientation.sign()
        }
        ContourSpec::Polygon { .. } => {
            // exact per-edge antiderivative: ∫_a^b dζ/(ζ−z) = Log((b−z)/(a−z))
            let v = c.polygon_vertices();
            (0..v.len())
                .map(|k| ((v[(k + 1) % v.len()] - z) / (v[k] - z)).ln())
                .collect::<CompensatedSum>()
                .total()
        }
        ContourSpec::Parametric { .. } => {
            integrate_contour(c, MIN_NODES, |zeta| Ok((zeta - z).inv()))?
        }
    };
    let index = integral / Complex::new(0.0, 2.0 * PI);
    let number = index.re.round();
    Ok(Winding {
        number: number as i64,
        residual: (index - number).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn unit_square() -> ContourSpec {
        ContourSpec::polygon(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)])
    }

    #[test]
    fn circle_nodes_are_equispaced() {
        let nodes = sample_contour(&ContourSpec::circle(c(0.0, 0.0), 1.0), 8).unwrap();
        assert!((nodes[0].point - c(1.0, 0.0)).norm() < 1e-15);
        assert!((nodes[2].point - c(0.0, 1.0)).norm() < 1e-15);
        assert!((nodes[4].point - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((nodes[6].point - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn four_nodes_rejected_below_minimum() {
        assert!(sample_contour(&ContourSpec::circle(c(0.0, 0.0), 1.0), 4).is_err());
    }

    #[test]
    fn polygon_node_count_is_per_edge() {
        assert_eq!(sample_contour(&unit_square(), 8).unwrap().len(), 32);
    }

    #[test]
    fn measure_elements_sum_to_zero() {
        let contours = [
            ContourSpec::circle(c(0.3, -0.2), 2.5),
            unit_square(),
            ContourSpec::parametric(
                |t| (c(2.0 * t.cos(), t.sin()), c(-2.0 * t.sin(), t.cos())),
                64,
            ),
        ];
        for contour in &contours {
            let nodes = sample_contour(contour, 64).unwrap();
            let total: CompensatedSum = nodes.iter().map(|n| n.dz).collect();
            assert!(total.total().norm() < 1e-14, "{contour}: {}", total.total());
        }
    }

    #[test]
    fn residue_and_polynomial_and_conjugate() {
        let unit = ContourSpec::circle(c(0.0, 0.0), 1.0);
        let two_pi_i = c(0.0, 2.0 * PI);
        let v = line_integral(&parse("1/z").unwrap(), &unit, 64).unwrap();
        assert!((v - two_pi_i).norm() < 1e-12);
        let v = line_integral(&parse("z^2").unwrap(), &unit, 256).unwrap();
        assert!(v.norm() < 1e-12);
        let v = line_integral(&parse("conj(z)").unwrap(), &unit, 256).unwrap();
        assert!((v - two_pi_i).norm() < 1e-12);
    }

    #[test]
    fn pole_on_contour_is_an_error() {
        let unit = ContourSpec::circle(c(0.0, 0.0), 1.0);
        let err = line_integral(&parse("1/(z-1)").unwrap(), &unit, 64).unwrap_err();
        assert!(matches!(err, Error::NodeEvaluation { index: 0, .. }));
    }

    #[test]
    fn polygon_green_area() {
        // ∮ z̄ dz = 2i·area
        let v = line_integral(&parse("conj(z)").unwrap(), &unit_square(), 8).unwrap();
        assert!((v - c(0.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn winding_numbers() {
        let unit = ContourSpec::circle(c(0.0, 0.0), 1.0);
        assert_eq!(winding_number(&unit, c(0.0, 0.0)).unwrap().number, 1);
        assert_eq!(winding_number(&unit, c(3.0, 0.0)).unwrap().number, 0);
        assert_eq!(
            winding_number(&unit.reversed(), c(0.0, 0.0))
                .unwrap()
                .number,
            -1
        );
        let w = winding_number(&unit, c(0.999, 0.0)).unwrap();
        assert_eq!(w.number, 1);
        assert!(w.residual < 1e-10);
        assert_eq!(
            winding_number(&unit_square(), c(0.5, 0.5)).unwrap().number,
            1
        );
        assert_eq!(
            winding_number(&unit_square(), c(1.5, 0.5)).unwrap().number,
            0
        );
        assert!(matches!(
            winding_number(&unit, c(1.0, 0.0)),
            Err(Error::PointOnContour { .. })
        ));
    }

    #[test]
    fn parse_contour_strings() {
        assert_eq!(
            ContourSpec::parse("circle:0,0,1").unwrap(),
            ContourSpec::circle(c(0.0, 0.0), 1.0)
        );
        assert_eq!(
            ContourSpec::parse("circle:1,-2,0.5,cw").unwrap(),
            ContourSpec::Circle {
                center: c(1.0, -2.0),
                radius: 0.5,
                orientation: Orientation::Clockwise
            }
        );
        assert_eq!(
            ContourSpec::parse("poly:0,0;1,0;1,1;0,1").unwrap(),
            unit_square()
        );
        assert!(ContourSpec::parse("circle:0,0,-1").is_err());
        assert!(ContourSpec::parse("circle:0,0").is_err());
        assert!(ContourSpec::parse("poly:0,0;1,0").is_err());
        assert!(ContourSpec::parse("poly:0,0;1,0;0,0").is_err());
        assert!(ContourSpec::parse("ellipse:0,0,1").is_err());
    }
}
