use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::{GeometryError, Point3, Result, Vector3};

/// Indexed triangle surface with derived per-face unit normals.
///
/// Invariants are enforced at construction: all face indices in range, no
/// zero-area faces, normals unit length.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Point3>,
    faces: Vec<[u32; 3]>,
    face_normals: Vec<Vector3>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Point3>, faces: Vec<[u32; 3]>) -> Result<Self> {
        let count = vertices.len();
        let mut face_normals = Vec::with_capacity(faces.len());
        for (fi, f) in faces.iter().enumerate() {
            for &i in f {
                if i as usize >= count {
                    return Err(GeometryError::FaceIndexOutOfRange { face: fi, index: i, count });
                }
            }
            let n = face_cross(&vertices, *f);
            let len = n.norm();
            if len == 0.0 || !len.is_finite() {
                return Err(GeometryError::DegenerateFace(fi));
            }
            face_normals.push(n / len);
        }
        Ok(Self { vertices, faces, face_normals })
    }

    /// Empty mesh (no vertices, no faces). Valid as a "nothing extracted" result.
    pub fn empty() -> Self {
        Self { vertices: Vec::new(), faces: Vec::new(), face_normals: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[u32; 3]] {
        &self.faces
    }

    pub fn face_normals(&self) -> &[Vector3] {
        &self.face_normals
    }

    pub fn face_vertices(&self, fi: usize) -> [Point3; 3] {
        let [a, b, c] = self.faces[fi];
        [self.vertices[a as usize], self.vertices[b as usize], self.vertices[c as usize]]
    }

    pub fn face_area(&self, fi: usize) -> f64 {
        0.5 * face_cross(&self.vertices, self.faces[fi]).norm()
    }

    pub fn total_area(&self) -> f64 {
        (0..self.faces.len()).map(|fi| self.face_area(fi)).sum()
    }

    /// Axis-aligned bounding box over vertices, or None for an empty mesh.
    pub fn bbox(&self) -> Option<(Point3, Point3)> {
        let mut it = self.vertices.iter();
        let first = *it.next()?;
        let (mut lo, mut hi) = (first, first);
        for v in it {
            for k in 0..3 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        Some((lo, hi))
    }

    /// Apply a per-vertex map, keeping topology. Normals are recomputed.
    pub fn map_vertices(&self, f: impl Fn(Point3) -> Point3) -> Result<Self> {
        let vertices = self.vertices.iter().map(|&v| f(v)).collect();
        Self::new(vertices, self.faces.clone())
    }

    /// Concatenate several meshes into one (disjoint union, indices offset).
    pub fn concat(meshes: &[TriMesh]) -> Result<TriMesh> {
        let mut vertices = Vec::new();
        let mut faces = Vec::new();
        for m in meshes {
            let off = vertices.len() as u32;
            vertices.extend_from_slice(&m.vertices);
            faces.extend(m.faces.iter().map(|f| [f[0] + off, f[1] + off, f[2] + off]));
        }
        TriMesh::new(vertices, faces)
    }

    /// ASCII OBJ with `v`/`f` records only.
    pub fn write_obj<W: Write>(&self, w: W) -> Result<()> {
        let mut w = BufWriter::new(w);
        for v in &self.vertices {
            writeln!(w, "v {} {} {}", v.x, v.y, v.z)?;
        }
        for f in &self.faces {
            writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_obj<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        self.write_obj(std::fs::File::create(path)?)
    }

    /// Parse ASCII OBJ. Only `v` and `f` records are honored; `#` comments,
    /// blank lines and any other record types are skipped.
    pub fn read_obj<R: Read>(r: R) -> Result<Self> {
        let r = BufReader::new(r);
        let mut vertices: Vec<Point3> = Vec::new();
        let mut faces: Vec<[u32; 3]> = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            let mut tok = line.split_whitespace();
            match tok.next() {
                Some("v") => {
                    let mut coords = [0.0f64; 3];
                    for c in coords.iter_mut() {
                        *c = tok
                            .next()
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| GeometryError::Parse {
                                line: lineno + 1,
                                message: "malformed vertex record".into(),
                            })?;
                    }
                    vertices.push(Point3::new(coords[0], coords[1], coords[2]));
                }
                Some("f") => {
                    let mut idx = [0u32; 3];
                    for i in idx.iter_mut() {
                        // Accept `f 1 2 3` and `f 1/..` forms; only the vertex index is used.
                        let s = tok.next().ok_or_else(|| GeometryError::Parse {
                            line: lineno + 1,
                            message: "face with fewer than 3 indices".into(),
                        })?;
                        let head = s.split('/').next().unwrap_or(s);
                        let one_based: i64 =
                            head.parse().map_err(|_| GeometryError::Parse {
                                line: lineno + 1,
                                message: format!("bad face index {s:?}"),
                            })?;
                        if one_based < 1 {
                            return Err(GeometryError::Parse {
                                line: lineno + 1,
                                message: "face indices must be positive".into(),
                            });
                        }
                        *i = (one_based - 1) as u32;
                    }
                    if tok.next().is_some() {
                        return Err(GeometryError::Parse {
                            line: lineno + 1,
                            message: "only triangle faces are supported".into(),
                        });
                    }
                    faces.push(idx);
                }
                _ => {}
            }
        }
        if vertices.is_empty() && faces.is_empty() {
            return Ok(Self::empty());
        }
        Self::new(vertices, faces)
    }

    pub fn load_obj<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::read_obj(std::fs::File::open(path)?)
    }
}

fn face_cross(vertices: &[Point3], [a, b, c]: [u32; 3]) -> Vector3 {
    let (a, b, c) = (vertices[a as usize], vertices[b as usize], vertices[c as usize]);
    (b - a).cross(&(c - a))
}
