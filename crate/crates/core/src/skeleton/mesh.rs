//! OBJ text for skeleta of fanifolds of dimension at most two.

use super::{skeleton_model, SkeletonModel};
use crate::fanifold::{Fanifold, FanifoldError, Result};
use std::f64::consts::TAU;
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Point,
    Circle,
    Torus,
    Segment,
    Cylinder,
    Polygon(usize),
    Disk,
}

impl Shape {
    fn kind(self) -> String {
        match self {
            Shape::Point => "point".into(),
            Shape::Circle => "circle".into(),
            Shape::Torus => "torus".into(),
            Shape::Segment => "segment".into(),
            Shape::Cylinder => "cylinder".into(),
            Shape::Polygon(3) => "triangle".into(),
            Shape::Polygon(4) => "quad".into(),
            Shape::Polygon(k) => format!("polygon{k}"),
            Shape::Disk => "disk".into(),
        }
    }
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

struct Obj {
    text: String,
    vertices: usize,
}

impl Obj {
    fn vertex(&mut self, x: f64, y: f64, z: f64) -> usize {
        writeln!(self.text, "v {} {} {}", fmt(x), fmt(y), fmt(z)).expect("write to string");
        self.vertices += 1;
        self.vertices
    }

    fn line(&mut self, ids: &[usize]) {
        let list: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
        writeln!(self.text, "l {}", list.join(" ")).expect("write to string");
    }

    fn face(&mut self, ids: &[usize]) {
        let list: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
        writeln!(self.text, "f {}", list.join(" ")).expect("write to string");
    }

    fn shape(&mut self, shape: Shape, ox: f64, oy: f64, res: usize) {
        let angle = |k: usize, n: usize| TAU * k as f64 / n as f64;
        match shape {
            Shape::Point => {
                let v = self.vertex(ox, oy, 0.0);
                writeln!(self.text, "p {v}").expect("write to string");
            }
            Shape::Circle => {
                let ids: Vec<usize> = (0..res).map(|k| self.vertex(ox + angle(k, res).cos(), oy + angle(k, res).sin(), 0.0)).collect();
                let mut closed = ids.clone();
                closed.push(ids[0]);
                self.line(&closed);
            }
            Shape::Segment => {
                let ids: Vec<usize> = (0..res).map(|k| self.vertex(ox + k as f64 / (res - 1) as f64, oy, 0.0)).collect();
                self.line(&ids);
            }
            Shape::Cylinder => {
                let ring = |obj: &mut Obj, z: f64| -> Vec<usize> {
                    (0..res).map(|k| obj.vertex(ox + angle(k, res).cos(), oy + angle(k, res).sin(), z)).collect()
                };
                let (a, b) = (ring(self, 0.0), ring(self, 1.0));
                for k in 0..res {
                    let n = (k + 1) % res;
                    self.face(&[a[k], a[n], b[n], b[k]]);
                }
            }
            Shape::Torus => {
                let mut grid = vec![];
                for i in 0..res {
                    let (u, r) = (angle(i, res), 0.4);
                    for j in 0..res {
                        let w = angle(j, res);
                        let rad = 1.0 + r * w.cos();
                        grid.push(self.vertex(ox + rad * u.cos(), oy + rad * u.sin(), r * w.sin()));
                    }
                }
                for i in 0..res {
                    for j in 0..res {
                        let (i2, j2) = ((i + 1) % res, (j + 1) % res);
                        self.face(&[grid[i * res + j], grid[i2 * res + j], grid[i2 * res + j2], grid[i * res + j2]]);
                    }
                }
            }
            Shape::Polygon(k) => {
                let ids: Vec<usize> = (0..k).map(|i| self.vertex(ox + angle(i, k).cos(), oy + angle(i, k).sin(), 0.0)).collect();
                self.face(&ids);
            }
            Shape::Disk => {
                let ids: Vec<usize> = (0..res).map(|i| self.vertex(ox + angle(i, res).cos(), oy + angle(i, res).sin(), 0.0)).collect();
                self.face(&ids);
            }
        }
    }
}

fn shape_of(phi: &Fanifold, f: usize) -> Result<Shape> {
    let s = phi.stratum(f);
    Ok(match (s.dim, s.codim()) {
        (0, 0) => Shape::Point,
        (0, 1) => Shape::Circle,
        (0, 2) => Shape::Torus,
        (1, 0) => Shape::Segment,
        (1, 1) => Shape::Cylinder,
        (2, 0) => {
            let sides = phi.arrows_into(f).into_iter().filter(|&a| phi.stratum(phi.arrow(a).from).dim + 1 == s.dim).count();
            if sides >= 3 {
                Shape::Polygon(sides)
            } else {
                Shape::Disk
            }
        }
        (d, c) => return Err(FanifoldError::Structure(format!("no mesh for a stratum of dimension {d} with fiber rank {c}"))),
    })
}

/// One group per fiber `π⁻¹(F) ≅ F × T^{codim F}`, laid out along the x axis,
/// followed by a `boundary` group for the skeleton of the ideal boundary when
/// it is known.
pub fn export_mesh(model: &SkeletonModel, resolution: usize) -> Result<String> {
    if model.dimension > 2 {
        return Err(FanifoldError::Structure(format!("mesh export supports dimension at most 2, got {}", model.dimension)));
    }
    if resolution < 3 {
        return Err(FanifoldError::Structure("resolution must be at least 3".into()));
    }
    let phi = model.fanifold();
    let mut obj = Obj { text: String::new(), vertices: 0 };
    for (group, f) in phi.interior_strata().into_iter().enumerate() {
        let shape = shape_of(phi, f)?;
        writeln!(obj.text, "g {}", phi.stratum(f).id).expect("write to string");
        writeln!(obj.text, "# kind {}", shape.kind()).expect("write to string");
        obj.shape(shape, 3.0 * group as f64, 0.0, resolution);
    }
    let boundary = match phi.ideal_boundary() {
        Ok(b) => Some(b),
        Err(FanifoldError::BoundaryRequired(_)) => None,
        Err(e) => return Err(e),
    };
    if let Some(b) = boundary.filter(|b| !b.interior_strata().is_empty()) {
        let bm = skeleton_model(&b)?;
        writeln!(obj.text, "g boundary").expect("write to string");
        for (k, f) in bm.fanifold().interior_strata().into_iter().enumerate() {
            let shape = shape_of(bm.fanifold(), f)?;
            writeln!(obj.text, "# kind {} {}", shape.kind(), bm.fanifold().stratum(f).id).expect("write to string");
            obj.shape(shape, 3.0 * k as f64, -4.0, resolution);
        }
    }
    Ok(obj.text)
}
