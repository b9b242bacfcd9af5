use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use nalgebra::Matrix4;

use crate::error::{Error, Result};

/// Deepest level accepted by [`TriangulatedSphere::new`].
pub const MAX_LEVEL: u32 = 7;

pub(crate) type Vec4 = [f64; 4];

pub(crate) fn det4(v: [Vec4; 4]) -> f64 {
    Matrix4::from_fn(|r, c| v[c][r]).determinant()
}

pub(crate) fn norm4(x: Vec4) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn normalize4(x: Vec4) -> Vec4 {
    let n = norm4(x);
    [x[0] / n, x[1] / n, x[2] / n, x[3] / n]
}

fn sub4(a: Vec4, b: Vec4) -> Vec4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

/// `det[n, v1 - v0, v2 - v0, v3 - v0]`; positive when the cell is positively
/// oriented as part of a boundary with outward normal `n`.
pub(crate) fn boundary_orientation(n: Vec4, v: [Vec4; 4]) -> f64 {
    det4([n, sub4(v[1], v[0]), sub4(v[2], v[0]), sub4(v[3], v[0])])
}

/// A 3-dimensional simplicial complex in `R^4` with oriented cells.
#[derive(Debug, Clone, Default)]
pub struct Complex {
    pub vertices: Vec<Vec4>,
    pub cells: Vec<[usize; 4]>,
}

impl Complex {
    pub fn cell_vertices(&self, cell: usize) -> [Vec4; 4] {
        self.cells[cell].map(|i| self.vertices[i])
    }
}

/// Boundary of the 16-cell, refined `level` times by renormalized edge midpoints.
#[derive(Debug, Clone)]
pub struct TriangulatedSphere {
    pub complex: Complex,
    pub level: u32,
}

impl TriangulatedSphere {
    pub fn new(level: u32) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::InvalidInput(format!("refinement level {level} exceeds {MAX_LEVEL}")));
        }
        let mut complex = cross_polytope();
        for _ in 0..level {
            complex = refine(&complex, |m| normalize4(m));
        }
        Ok(Self { complex, level })
    }

    /// Shared instance per level; built once.
    pub fn cached(level: u32) -> Result<Arc<Self>> {
        static CACHE: [OnceLock<Arc<TriangulatedSphere>>; MAX_LEVEL as usize + 1] = [const { OnceLock::new() }; MAX_LEVEL as usize + 1];
        if level > MAX_LEVEL {
            return Err(Error::InvalidInput(format!("refinement level {level} exceeds {MAX_LEVEL}")));
        }
        Ok(CACHE[level as usize].get_or_init(|| Arc::new(Self::new(level).expect("level checked"))).clone())
    }

    pub fn vertices(&self) -> &[Vec4] {
        &self.complex.vertices
    }

    pub fn cells(&self) -> &[[usize; 4]] {
        &self.complex.cells
    }

    /// Sum of the spherical volumes of the radially projected cells.
    pub fn spherical_volume(&self) -> f64 {
        (0..self.complex.cells.len()).map(|c| projected_volume(self.complex.cell_vertices(c))).sum()
    }
}

fn cross_polytope() -> Complex {
    let mut vertices = Vec::with_capacity(8);
    for i in 0..4 {
        for s in [1.0, -1.0] {
            let mut v = [0.0; 4];
            v[i] = s;
            vertices.push(v);
        }
    }
    let mut cells = Vec::with_capacity(16);
    for signs in 0..16usize {
        let mut cell = [0usize; 4];
        for (i, c) in cell.iter_mut().enumerate() {
            *c = 2 * i + ((signs >> i) & 1);
        }
        cells.push(cell);
    }
    let mut complex = Complex { vertices, cells };
    orient_radially(&mut complex);
    complex
}

fn orient_radially(complex: &mut Complex) {
    for c in 0..complex.cells.len() {
        if det4(complex.cell_vertices(c)) < 0.0 {
            complex.cells[c].swap(0, 1);
        }
    }
}

/// Splits each tetrahedron into eight; `place` maps each raw edge midpoint to its final position.
pub(crate) fn refine(complex: &Complex, place: impl Fn(Vec4) -> Vec4) -> Complex {
    let mut vertices = complex.vertices.clone();
    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
    let mut midpoint = |i: usize, j: usize, vertices: &mut Vec<Vec4>| -> usize {
        let key = (i.min(j), i.max(j));
        *midpoints.entry(key).or_insert_with(|| {
            let (a, b) = (vertices[i], vertices[j]);
            vertices.push(place([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2]), 0.5 * (a[3] + b[3])]));
            vertices.len() - 1
        })
    };
    let mut cells = Vec::with_capacity(8 * complex.cells.len());
    for parent in &complex.cells {
        let [v0, v1, v2, v3] = *parent;
        let m01 = midpoint(v0, v1, &mut vertices);
        let m02 = midpoint(v0, v2, &mut vertices);
        let m03 = midpoint(v0, v3, &mut vertices);
        let m12 = midpoint(v1, v2, &mut vertices);
        let m13 = midpoint(v1, v3, &mut vertices);
        let m23 = midpoint(v2, v3, &mut vertices);
        let parent_sign = orientation_sign(&vertices, *parent);
        let mut children = vec![[v0, m01, m02, m03], [m01, v1, m12, m13], [m02, m12, v2, m23], [m03, m13, m23, v3]];
        // inner octahedron, cut along its shortest diagonal
        let pairs = [(m01, m23), (m02, m13), (m03, m12)];
        let dist = |(i, j): (usize, usize)| norm4(sub4(vertices[i], vertices[j]));
        let k = (0..3).min_by(|&x, &y| dist(pairs[x]).total_cmp(&dist(pairs[y]))).expect("three diagonals");
        let (d0, d1) = pairs[k];
        let (x0, x1) = pairs[(k + 1) % 3];
        let (y0, y1) = pairs[(k + 2) % 3];
        let ring = [x0, y0, x1, y1];
        for r in 0..4 {
            children.push([d0, d1, ring[r], ring[(r + 1) % 4]]);
        }
        for mut child in children {
            if orientation_sign(&vertices, child) != parent_sign {
                child.swap(0, 1);
            }
            cells.push(child);
        }
    }
    Complex { vertices, cells }
}

/// Orientation of a cell relative to the outward radial direction at its centroid.
fn orientation_sign(vertices: &[Vec4], cell: [usize; 4]) -> bool {
    let v = cell.map(|i| vertices[i]);
    let mut n = [0.0; 4];
    for p in &v {
        for k in 0..4 {
            n[k] += 0.25 * p[k];
        }
    }
    boundary_orientation(n, v) > 0.0
}

/// Vector orthogonal to three vectors in `R^4`, with length equal to the
/// 3-volume of the parallelepiped they span.
pub(crate) fn cross4(e: [Vec4; 3]) -> Vec4 {
    let mut n = [0.0; 4];
    for (k, nk) in n.iter_mut().enumerate() {
        let cols: Vec<usize> = (0..4).filter(|&c| c != k).collect();
        let m = nalgebra::Matrix3::from_fn(|i, j| e[i][cols[j]]);
        *nk = if k % 2 == 0 { m.determinant() } else { -m.determinant() };
    }
    n
}

/// Spherical volume of the radial projection of a flat tetrahedron,
/// `∫_T |x·n| / |x|^4 dV`, by a degree-2 four-point rule.
pub(crate) fn projected_volume(v: [Vec4; 4]) -> f64 {
    let e = [sub4(v[1], v[0]), sub4(v[2], v[0]), sub4(v[3], v[0])];
    let n = cross4(e);
    let volume = norm4(n) / 6.0;
    let n = normalize4(n);
    let (a, b) = (0.585_410_196_624_968_5, 0.138_196_601_125_010_5);
    let mut total = 0.0;
    for corner in 0..4 {
        let mut x = [0.0; 4];
        for (j, p) in v.iter().enumerate() {
            let c = if j == corner { a } else { b };
            for k in 0..4 {
                x[k] += c * p[k];
            }
        }
        let r2: f64 = x.iter().map(|t| t * t).sum();
        let dot: f64 = (0..4).map(|k| x[k] * n[k]).sum();
        total += 0.25 * dot.abs() / (r2 * r2);
    }
    total * volume
}
