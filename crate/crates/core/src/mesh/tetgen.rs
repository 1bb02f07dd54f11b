//! TetGen ASCII mesh I/O (`.node`/`.ele` pairs) and the CSV side files for
//! nodal vorticity input and velocity output.
//!
//! Formats are whitespace-delimited with `#` comments. Both 0- and 1-based
//! node numbering are accepted; whichever base the first data row uses is
//! honored throughout and remembered on the mesh so output files round-trip
//! with the same ids.

use super::TetMesh;
use crate::error::MeshError;
use crate::vec3::Vec3;
use std::fmt::Write as _;
use std::path::Path;

/// Read one text file into (1-based line number, comment-stripped content)
/// pairs, skipping blank lines.
fn data_lines(path: &Path) -> Result<Vec<(usize, String)>, MeshError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| MeshError::Io { path: path.to_path_buf(), source })?;
    Ok(text
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                None
            } else {
                Some((i + 1, content.to_string()))
            }
        })
        .collect())
}

fn parse_error(path: &Path, line: usize, msg: impl Into<String>) -> MeshError {
    MeshError::Parse { path: path.to_path_buf(), line, msg: msg.into() }
}

fn parse_field<T: std::str::FromStr>(
    path: &Path,
    line: usize,
    field: &str,
    what: &str,
) -> Result<T, MeshError> {
    field
        .parse::<T>()
        .map_err(|_| parse_error(path, line, format!("cannot parse {what} from {field:?}")))
}

/// Contents of a `.node` file: positions, optional nodal vorticity, and
/// the file's numbering base.
type NodeFileData = (Vec<Vec3>, Option<Vec<Vec3>>, i64);

/// Parse a `.node` file: positions, optional vorticity from the first three
/// attribute columns, and the file's numbering base.
fn parse_node_file(path: &Path) -> Result<NodeFileData, MeshError> {
    let lines = data_lines(path)?;
    let Some(((hline, header), rows)) = lines.split_first().map(|(h, r)| (h.clone(), r)) else {
        return Err(parse_error(path, 1, "empty .node file"));
    };
    let hf: Vec<&str> = header.split_whitespace().collect();
    if hf.len() != 4 {
        return Err(parse_error(
            path,
            hline,
            format!(
                ".node header needs 4 fields (n_points dim n_attrs n_bmarks), got {}",
                hf.len()
            ),
        ));
    }
    let n_points: usize = parse_field(path, hline, hf[0], "point count")?;
    let dim: usize = parse_field(path, hline, hf[1], "dimension")?;
    let n_attrs: usize = parse_field(path, hline, hf[2], "attribute count")?;
    let n_bmarks: usize = parse_field(path, hline, hf[3], "boundary-marker count")?;
    if dim != 3 {
        return Err(MeshError::Unsupported {
            path: path.to_path_buf(),
            line: hline,
            msg: format!("dimension {dim}; only 3-D points are supported"),
        });
    }
    if rows.len() != n_points {
        return Err(parse_error(
            path,
            hline,
            format!("header promises {n_points} points, file has {} data rows", rows.len()),
        ));
    }

    let expected = 4 + n_attrs + n_bmarks;
    let read_vorticity = n_attrs >= 3;
    let mut base = 0i64;
    let mut positions: Vec<Option<Vec3>> = vec![None; n_points];
    let mut vorticity: Vec<Vec3> = vec![Vec3::ZERO; n_points];

    for (row, (lno, content)) in rows.iter().enumerate() {
        let f: Vec<&str> = content.split_whitespace().collect();
        if f.len() != expected {
            return Err(parse_error(
                path,
                *lno,
                format!("expected {expected} fields, got {}", f.len()),
            ));
        }
        let idx: i64 = parse_field(path, *lno, f[0], "node index")?;
        if row == 0 {
            base = idx;
            if base < 0 {
                return Err(parse_error(path, *lno, format!("negative node index {idx}")));
            }
        }
        let slot = idx - base;
        if slot < 0 || slot as usize >= n_points {
            return Err(parse_error(
                path,
                *lno,
                format!("node index {idx} outside {base}..{}", base + n_points as i64 - 1),
            ));
        }
        let slot = slot as usize;
        if positions[slot].is_some() {
            return Err(parse_error(path, *lno, format!("duplicate node index {idx}")));
        }
        let x: f64 = parse_field(path, *lno, f[1], "x coordinate")?;
        let y: f64 = parse_field(path, *lno, f[2], "y coordinate")?;
        let z: f64 = parse_field(path, *lno, f[3], "z coordinate")?;
        positions[slot] = Some(Vec3::new(x, y, z));
        if read_vorticity {
            let wx: f64 = parse_field(path, *lno, f[4], "attribute")?;
            let wy: f64 = parse_field(path, *lno, f[5], "attribute")?;
            let wz: f64 = parse_field(path, *lno, f[6], "attribute")?;
            vorticity[slot] = Vec3::new(wx, wy, wz);
        }
    }

    let nodes: Vec<Vec3> = positions.into_iter().map(|p| p.unwrap()).collect();
    Ok((nodes, read_vorticity.then_some(vorticity), base))
}

/// Parse an `.ele` file into cell connectivity, mapping node references
/// through the `.node` file's numbering base.
fn parse_ele_file(path: &Path, node_base: i64) -> Result<Vec<[usize; 4]>, MeshError> {
    let lines = data_lines(path)?;
    let Some(((hline, header), rows)) = lines.split_first().map(|(h, r)| (h.clone(), r)) else {
        return Err(parse_error(path, 1, "empty .ele file"));
    };
    let hf: Vec<&str> = header.split_whitespace().collect();
    if hf.len() < 2 || hf.len() > 3 {
        return Err(parse_error(
            path,
            hline,
            format!(
                ".ele header needs 2-3 fields (n_tets nodes_per_tet [n_attrs]), got {}",
                hf.len()
            ),
        ));
    }
    let n_tets: usize = parse_field(path, hline, hf[0], "cell count")?;
    let nodes_per_tet: usize = parse_field(path, hline, hf[1], "nodes per cell")?;
    let n_attrs: usize =
        if hf.len() == 3 { parse_field(path, hline, hf[2], "attribute count")? } else { 0 };
    if nodes_per_tet != 4 {
        return Err(MeshError::Unsupported {
            path: path.to_path_buf(),
            line: hline,
            msg: format!("{nodes_per_tet}-node cells; only 4-node tetrahedra are supported"),
        });
    }
    if rows.len() != n_tets {
        return Err(parse_error(
            path,
            hline,
            format!("header promises {n_tets} cells, file has {} data rows", rows.len()),
        ));
    }

    let expected = 5 + n_attrs;
    let mut cells = Vec::with_capacity(n_tets);
    for (lno, content) in rows {
        let f: Vec<&str> = content.split_whitespace().collect();
        if f.len() != expected {
            return Err(parse_error(
                path,
                *lno,
                format!("expected {expected} fields, got {}", f.len()),
            ));
        }
        let mut ids = [0usize; 4];
        for k in 0..4 {
            let raw: i64 = parse_field(path, *lno, f[1 + k], "node reference")?;
            let shifted = raw - node_base;
            if shifted < 0 {
                return Err(MeshError::Validation(format!(
                    "{}:{}: node reference {raw} below the node file's base {node_base}",
                    path.display(),
                    lno
                )));
            }
            ids[k] = shifted as usize;
        }
        cells.push(ids);
    }
    Ok(cells)
}

/// Load a TetGen ASCII `.node`/`.ele` pair.
///
/// Vorticity is zero-filled unless the `.node` file carries three or more
/// attribute columns, in which case the first three are read as
/// (ω_x, ω_y, ω_z). Out-of-range node references and degenerate cells are
/// reported as validation errors; malformed text as parse errors with the
/// offending line number.
pub fn load_tetgen(
    node_path: impl AsRef<Path>,
    ele_path: impl AsRef<Path>,
) -> Result<TetMesh, MeshError> {
    let node_path = node_path.as_ref();
    let ele_path = ele_path.as_ref();
    let (nodes, vorticity, base) = parse_node_file(node_path)?;
    let cells = parse_ele_file(ele_path, base)?;
    let mut mesh = TetMesh::new(nodes, cells)?;
    mesh.index_base = base as usize;
    if let Some(w) = vorticity {
        mesh.vorticity = w;
    }
    Ok(mesh)
}

/// Write a mesh as a TetGen ASCII `.node`/`.ele` pair, emitting the nodal
/// vorticity as three attribute columns. Floats are printed in Rust's
/// shortest round-trip form, so reloading our own files reproduces
/// coordinates bit-compatibly.
pub fn write_tetgen(
    mesh: &TetMesh,
    node_path: impl AsRef<Path>,
    ele_path: impl AsRef<Path>,
) -> Result<(), MeshError> {
    let node_path = node_path.as_ref();
    let ele_path = ele_path.as_ref();
    let base = mesh.index_base;

    let mut out = String::new();
    let _ = writeln!(out, "{} 3 3 0", mesh.nodes.len());
    for (i, (p, w)) in mesh.nodes.iter().zip(&mesh.vorticity).enumerate() {
        let _ = writeln!(out, "{} {} {} {} {} {} {}", base + i, p.x, p.y, p.z, w.x, w.y, w.z);
    }
    std::fs::write(node_path, out)
        .map_err(|source| MeshError::Io { path: node_path.to_path_buf(), source })?;

    let mut out = String::new();
    let _ = writeln!(out, "{} 4 0", mesh.tets.len());
    for (t, tet) in mesh.tets.iter().enumerate() {
        let n = tet.nodes;
        let _ = writeln!(
            out,
            "{} {} {} {} {}",
            base + t,
            base + n[0],
            base + n[1],
            base + n[2],
            base + n[3]
        );
    }
    std::fs::write(ele_path, out)
        .map_err(|source| MeshError::Io { path: ele_path.to_path_buf(), source })?;
    Ok(())
}

/// Load nodal vorticity from a CSV side file (header then one row per node,
/// `node,wx,wy,wz`, ids in the mesh's numbering base) and apply it to the
/// mesh. Every node must be covered exactly once.
pub fn load_vorticity_csv(mesh: &mut TetMesh, path: impl AsRef<Path>) -> Result<(), MeshError> {
    let path = path.as_ref();
    let lines = data_lines(path)?;
    let Some(((hline, header), rows)) = lines.split_first().map(|(h, r)| (h.clone(), r)) else {
        return Err(parse_error(path, 1, "empty vorticity CSV"));
    };
    let hcols = header.split(',').count();
    if hcols != 4 {
        return Err(parse_error(
            path,
            hline,
            format!("vorticity CSV header needs 4 columns (node,wx,wy,wz), got {hcols}"),
        ));
    }

    let n = mesh.nodes.len();
    let base = mesh.index_base as i64;
    let mut values = vec![None; n];
    for (lno, content) in rows {
        let f: Vec<&str> = content.split(',').map(str::trim).collect();
        if f.len() != 4 {
            return Err(parse_error(path, *lno, format!("expected 4 columns, got {}", f.len())));
        }
        let idx: i64 = parse_field(path, *lno, f[0], "node id")?;
        let slot = idx - base;
        if slot < 0 || slot as usize >= n {
            return Err(MeshError::Validation(format!(
                "{}:{}: node id {idx} outside {base}..{}",
                path.display(),
                lno,
                base + n as i64 - 1
            )));
        }
        let slot = slot as usize;
        if values[slot].is_some() {
            return Err(parse_error(path, *lno, format!("duplicate node id {idx}")));
        }
        let wx: f64 = parse_field(path, *lno, f[1], "wx")?;
        let wy: f64 = parse_field(path, *lno, f[2], "wy")?;
        let wz: f64 = parse_field(path, *lno, f[3], "wz")?;
        values[slot] = Some(Vec3::new(wx, wy, wz));
    }
    let missing = values.iter().filter(|v| v.is_none()).count();
    if missing > 0 {
        return Err(MeshError::Validation(format!(
            "{}: vorticity CSV covers {} of {n} nodes",
            path.display(),
            n - missing
        )));
    }
    mesh.vorticity = values.into_iter().map(|v| v.unwrap()).collect();
    Ok(())
}

/// Write evaluated velocities as CSV: header `node,x,y,z,vx,vy,vz`, one row
/// per evaluation point. `ids` carry the caller's numbering (typically
/// `mesh.index_base + node index`).
pub fn write_velocity_csv(
    path: impl AsRef<Path>,
    ids: &[usize],
    points: &[Vec3],
    velocities: &[Vec3],
) -> Result<(), MeshError> {
    let path = path.as_ref();
    if ids.len() != points.len() || points.len() != velocities.len() {
        return Err(MeshError::Validation(format!(
            "velocity CSV arrays disagree: {} ids, {} points, {} velocities",
            ids.len(),
            points.len(),
            velocities.len()
        )));
    }
    let mut out = String::from("node,x,y,z,vx,vy,vz\n");
    for ((id, p), v) in ids.iter().zip(points).zip(velocities) {
        let _ = writeln!(out, "{},{},{},{},{},{},{}", id, p.x, p.y, p.z, v.x, v.y, v.z);
    }
    std::fs::write(path, out).map_err(|source| MeshError::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn write(dir: &Path, name: &str, content: &str) -> std::path::PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, content).unwrap();
        p
    }

    #[test]
    fn loads_unit_tet_pair_one_based() {
        let dir = tempfile::tempdir().unwrap();
        let node = write(
            dir.path(),
            "t.node",
            "# unit tetra\n4 3 0 0\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 0 1\n",
        );
        let ele = write(dir.path(), "t.ele", "1 4 0\n1 1 2 3 4\n");
        let mesh = load_tetgen(&node, &ele).unwrap();
        assert_eq!(mesh.nodes.len(), 4);
        assert_eq!(mesh.tets.len(), 1);
        assert_eq!(mesh.index_base, 1);
        assert_abs_diff_eq!(mesh.tets[0].h2, 2.0, epsilon = 1e-15);
        assert!(mesh.vorticity.iter().all(|&w| w == Vec3::ZERO));
    }

    #[test]
    fn node_attributes_become_vorticity() {
        let dir = tempfile::tempdir().unwrap();
        let node = write(
            dir.path(),
            "t.node",
            "4 3 3 0\n0 0 0 0 0 0 1\n1 1 0 0 0 0 1\n2 0 1 0 0 0 1\n3 0 0 1 0 0 1\n",
        );
        let ele = write(dir.path(), "t.ele", "1 4\n0 0 1 2 3\n");
        let mesh = load_tetgen(&node, &ele).unwrap();
        assert_eq!(mesh.index_base, 0);
        assert!(mesh.vorticity.iter().all(|&w| w == Vec3::new(0.0, 0.0, 1.0)));
    }

    #[test]
    fn out_of_range_reference_is_validation_error() {
        let dir = tempfile::tempdir().unwrap();
        let node = write(dir.path(), "t.node", "4 3 0 0\n0 0 0 0\n1 1 0 0\n2 0 1 0\n3 0 0 1\n");
        let ele = write(dir.path(), "t.ele", "1 4 0\n0 0 1 2 99\n");
        let err = load_tetgen(&node, &ele).unwrap_err();
        assert!(matches!(err, MeshError::Validation(_)), "{err}");
    }

    #[test]
    fn five_node_cells_are_unsupported() {
        let dir = tempfile::tempdir().unwrap();
        let node = write(dir.path(), "t.node", "4 3 0 0\n0 0 0 0\n1 1 0 0\n2 0 1 0\n3 0 0 1\n");
        let ele = write(dir.path(), "t.ele", "1 5 0\n0 0 1 2 3 3\n");
        let err = load_tetgen(&node, &ele).unwrap_err();
        assert!(matches!(err, MeshError::Unsupported { .. }), "{err}");
    }

    #[test]
    fn malformed_row_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let node = write(dir.path(), "t.node", "2 3 0 0\n0 0 0 0\n1 1 oops 0\n");
        let ele = write(dir.path(), "t.ele", "0 4 0\n");
        let err = load_tetgen(&node, &ele).unwrap_err();
        match err {
            MeshError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn round_trip_is_bit_compatible() {
        let dir = tempfile::tempdir().unwrap();
        let mut mesh = super::super::generate::lattice_mesh(
            Vec3::new(-0.3, 0.1, -0.7),
            Vec3::new(1.1, 0.9, 0.4),
            2,
        );
        mesh.set_vorticity(|p| Vec3::new(p.y * 0.31, -p.x / 3.0, p.z.powi(2)));
        let node = dir.path().join("rt.node");
        let ele = dir.path().join("rt.ele");
        write_tetgen(&mesh, &node, &ele).unwrap();
        let back = load_tetgen(&node, &ele).unwrap();
        assert_eq!(back.nodes.len(), mesh.nodes.len());
        assert_eq!(back.tets.len(), mesh.tets.len());
        for (a, b) in mesh.nodes.iter().zip(&back.nodes) {
            assert_eq!(a, b, "coordinates must round-trip exactly");
        }
        for (a, b) in mesh.vorticity.iter().zip(&back.vorticity) {
            assert_eq!(a, b, "vorticity must round-trip exactly");
        }
        for (a, b) in mesh.tets.iter().zip(&back.tets) {
            assert_eq!(a.nodes, b.nodes);
        }
    }

    #[test]
    fn vorticity_csv_overrides_and_validates() {
        let dir = tempfile::tempdir().unwrap();
        let node = write(
            dir.path(),
            "t.node",
            "4 3 3 0\n1 0 0 0 9 9 9\n2 1 0 0 9 9 9\n3 0 1 0 9 9 9\n4 0 0 1 9 9 9\n",
        );
        let ele = write(dir.path(), "t.ele", "1 4 0\n1 1 2 3 4\n");
        let mut mesh = load_tetgen(&node, &ele).unwrap();

        let csv = write(dir.path(), "w.csv", "node,wx,wy,wz\n1,0,0,1\n2,0,0,2\n3,0,0,3\n4,0,0,4\n");
        load_vorticity_csv(&mut mesh, &csv).unwrap();
        assert_eq!(mesh.vorticity[3], Vec3::new(0.0, 0.0, 4.0));

        let partial = write(dir.path(), "p.csv", "node,wx,wy,wz\n1,0,0,1\n");
        assert!(load_vorticity_csv(&mut mesh, &partial).is_err());

        let bad_id =
            write(dir.path(), "b.csv", "node,wx,wy,wz\n1,0,0,1\n2,0,0,2\n3,0,0,3\n9,0,0,4\n");
        assert!(load_vorticity_csv(&mut mesh, &bad_id).is_err());
    }

    #[test]
    fn velocity_csv_format() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.csv");
        write_velocity_csv(
            &path,
            &[1, 2],
            &[Vec3::new(0.5, 0.0, 0.0), Vec3::new(0.0, 0.25, 0.0)],
            &[Vec3::new(0.0, 0.1, 0.0), Vec3::new(-0.1, 0.0, 0.0)],
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("node,x,y,z,vx,vy,vz"));
        assert_eq!(lines.next(), Some("1,0.5,0,0,0,0.1,0"));
        assert_eq!(lines.next(), Some("2,0,0.25,0,-0.1,0,0"));
    }
}
