//! Binary cache of built geometries.
//!
//! Layout, all integers little-endian: the magic bytes, a `u32` format
//! version, then sections `META`, `VERT`, `OBJS`, `LINE`, `OPPR` and `END `.
//! Each section is a 4-byte tag, a `u64` payload length, the payload and the
//! CRC-32 of the payload. The ambient space is rebuilt from the stored spec
//! on load and checked against the stored vertices.

use std::fs;
use std::io::{Cursor, Read, Write};
use std::path::{Path, PathBuf};

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};
use geomcensus::bits::BitRow;
use geomcensus::fields::FieldElement;
use geomcensus::grassmann::{GeometryKind, Instance, OppositionContext, PointLineGeometry, SpinClass};
use geomcensus::linalg::Subspace;
use geomcensus::spaces::Flat;
use geomcensus::fields::FieldSpec;

use crate::error::{CliError, CliResult};
use crate::spec::GeometrySpec;

pub const MAGIC: &[u8; 8] = b"GEOMCNS\0";
pub const FORMAT_VERSION: u32 = 1;
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const EXTENSION: &str = "gcb";

/// Header fields of a cache file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheMeta {
    pub spec: String,
    pub code_version: String,
    pub kind: GeometryKind,
    pub type_index: usize,
    pub line_size: usize,
    pub self_typed: bool,
    pub ambient_dim: usize,
    pub q: usize,
    pub num_points: usize,
    pub num_vertices: usize,
    pub num_objects: usize,
}

/// File name for a spec: a readable slug plus a checksum of the spec string
/// and code version.
pub fn file_name(spec: &GeometrySpec) -> String {
    let key = spec.to_string();
    let slug: String = key
        .chars()
        .map(|c| match c {
            '+' => 'p',
            '-' => 'm',
            c if c.is_ascii_alphanumeric() => c,
            _ => '_',
        })
        .collect();
    let mut h = crc32fast::Hasher::new();
    h.update(key.as_bytes());
    h.update(&[0]);
    h.update(CODE_VERSION.as_bytes());
    h.update(&FORMAT_VERSION.to_le_bytes());
    format!("{slug}-{:08x}.{EXTENSION}", h.finalize())
}

pub fn path_for(dir: &Path, spec: &GeometrySpec) -> PathBuf {
    dir.join(file_name(spec))
}

fn put_str(w: &mut Vec<u8>, s: &str) {
    w.write_u32::<LE>(s.len() as u32).unwrap();
    w.extend_from_slice(s.as_bytes());
}

fn put_row(w: &mut Vec<u8>, row: &BitRow) {
    w.write_u32::<LE>(row.len() as u32).unwrap();
    w.write_u32::<LE>(row.words().len() as u32).unwrap();
    for &x in row.words() {
        w.write_u64::<LE>(x).unwrap();
    }
}

fn put_flats(w: &mut Vec<u8>, flats: &[Flat]) {
    w.write_u32::<LE>(flats.len() as u32).unwrap();
    for f in flats {
        w.write_u32::<LE>(f.space.dim() as u32).unwrap();
        for row in f.space.basis() {
            w.extend(row.iter().map(|x| x.index() as u8));
        }
        put_row(w, &f.points);
    }
}

fn kind_code(kind: &GeometryKind) -> [u32; 4] {
    match *kind {
        GeometryKind::ProjectiveGrassmannian { n, q, k } => [0, n as u32, q as u32, k as u32],
        GeometryKind::PolarGrassmannian { i } => [1, i as u32, 0, 0],
        GeometryKind::DualPolar => [2, 0, 0, 0],
        GeometryKind::HalfSpin { class } => [3, (class == SpinClass::B) as u32, 0, 0],
    }
}

fn kind_of(code: [u32; 4]) -> Option<GeometryKind> {
    let [tag, a, b, c] = code.map(|x| x as usize);
    Some(match tag {
        0 => GeometryKind::ProjectiveGrassmannian { n: a, q: b, k: c },
        1 => GeometryKind::PolarGrassmannian { i: a },
        2 => GeometryKind::DualPolar,
        3 => GeometryKind::HalfSpin { class: if a == 1 { SpinClass::B } else { SpinClass::A } },
        _ => return None,
    })
}

fn meta_of(spec: &GeometrySpec, inst: &Instance) -> CacheMeta {
    let g = &inst.geometry;
    let sample = &g.vertices()[0];
    let q = match &inst.ambient {
        geomcensus::grassmann::Ambient::Projective(p) => p.field().order(),
        geomcensus::grassmann::Ambient::Polar(p) => p.field().order(),
    };
    CacheMeta {
        spec: spec.to_string(),
        code_version: CODE_VERSION.to_string(),
        kind: g.kind().clone(),
        type_index: g.type_index(),
        line_size: g.line_size(),
        self_typed: inst.opposition.is_self_typed(),
        ambient_dim: sample.space.ambient(),
        q,
        num_points: sample.points.len(),
        num_vertices: g.num_vertices(),
        num_objects: inst.opposition.num_objects(),
    }
}

fn section(out: &mut Vec<u8>, tag: &[u8; 4], payload: &[u8]) {
    out.extend_from_slice(tag);
    out.write_u64::<LE>(payload.len() as u64).unwrap();
    out.extend_from_slice(payload);
    out.write_u32::<LE>(crc32fast::hash(payload)).unwrap();
}

/// Serializes an instance built from `spec`.
pub fn encode(spec: &GeometrySpec, inst: &Instance) -> Vec<u8> {
    let meta = meta_of(spec, inst);
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.write_u32::<LE>(FORMAT_VERSION).unwrap();

    let mut p = Vec::new();
    put_str(&mut p, &meta.spec);
    put_str(&mut p, &meta.code_version);
    for x in kind_code(&meta.kind) {
        p.write_u32::<LE>(x).unwrap();
    }
    for x in [meta.type_index, meta.line_size, meta.self_typed as usize, meta.ambient_dim, meta.q, meta.num_points] {
        p.write_u32::<LE>(x as u32).unwrap();
    }
    p.write_u32::<LE>(meta.num_vertices as u32).unwrap();
    p.write_u32::<LE>(meta.num_objects as u32).unwrap();
    section(&mut out, b"META", &p);

    let mut p = Vec::new();
    put_flats(&mut p, inst.geometry.vertices());
    section(&mut out, b"VERT", &p);

    let mut p = Vec::new();
    put_flats(&mut p, if meta.self_typed { &[] } else { inst.opposition.objects() });
    section(&mut out, b"OBJS", &p);

    let mut p = Vec::new();
    p.write_u32::<LE>(inst.geometry.lines().len() as u32).unwrap();
    for l in inst.geometry.lines() {
        p.write_u32::<LE>(l.len() as u32).unwrap();
        for &v in l {
            p.write_u32::<LE>(v as u32).unwrap();
        }
    }
    section(&mut out, b"LINE", &p);

    let mut p = Vec::new();
    p.write_u32::<LE>(inst.opposition.rows().len() as u32).unwrap();
    for row in inst.opposition.rows() {
        put_row(&mut p, row);
    }
    section(&mut out, b"OPPR", &p);

    section(&mut out, b"END ", &[]);
    out
}

/// Reads sections in order, checking tags and checksums.
struct Reader<'a> {
    data: Cursor<&'a [u8]>,
    path: &'a Path,
}

type Payload = Cursor<Vec<u8>>;

impl<'a> Reader<'a> {
    fn fail<T>(&self, reason: impl Into<String>) -> CliResult<T> {
        Err(CliError::Cache { path: self.path.to_path_buf(), reason: reason.into() })
    }

    fn header(&mut self) -> CliResult<()> {
        let mut magic = [0u8; 8];
        if self.data.read_exact(&mut magic).is_err() || &magic != MAGIC {
            return self.fail("not a geometry cache file");
        }
        match self.data.read_u32::<LE>() {
            Ok(FORMAT_VERSION) => Ok(()),
            Ok(v) => self.fail(format!("format version {v}, expected {FORMAT_VERSION}")),
            Err(_) => self.fail("truncated header"),
        }
    }

    fn section(&mut self, tag: &[u8; 4]) -> CliResult<Payload> {
        let name = String::from_utf8_lossy(tag).trim().to_string();
        let mut got = [0u8; 4];
        if self.data.read_exact(&mut got).is_err() {
            return self.fail(format!("missing section {name}"));
        }
        if &got != tag {
            return self.fail(format!("expected section {name}, found {:?}", String::from_utf8_lossy(&got)));
        }
        let len = match self.data.read_u64::<LE>() {
            Ok(n) => n as usize,
            Err(_) => return self.fail(format!("truncated section {name}")),
        };
        let remaining = self.data.get_ref().len() - self.data.position() as usize;
        if len > remaining {
            return self.fail(format!("truncated section {name}"));
        }
        let mut payload = vec![0u8; len];
        self.data.read_exact(&mut payload).unwrap();
        let Ok(crc) = self.data.read_u32::<LE>() else {
            return self.fail(format!("truncated section {name}"));
        };
        if crc != crc32fast::hash(&payload) {
            return self.fail(format!("checksum mismatch in section {name}"));
        }
        Ok(Cursor::new(payload))
    }
}

fn get_str(p: &mut Payload) -> std::io::Result<String> {
    let n = p.read_u32::<LE>()? as usize;
    let mut b = vec![0u8; n];
    p.read_exact(&mut b)?;
    String::from_utf8(b).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
}

fn get_row(p: &mut Payload) -> std::io::Result<BitRow> {
    let len = p.read_u32::<LE>()? as usize;
    let n = p.read_u32::<LE>()? as usize;
    if n != len.div_ceil(64) {
        return Err(std::io::Error::new(std::io::ErrorKind::InvalidData, "bit row word count"));
    }
    let words = (0..n).map(|_| p.read_u64::<LE>()).collect::<std::io::Result<Vec<u64>>>()?;
    Ok(BitRow::from_words(len, words))
}

fn get_flats(p: &mut Payload, f: &FieldSpec, ambient: usize) -> std::io::Result<Vec<Flat>> {
    let bad = |what: &str| std::io::Error::new(std::io::ErrorKind::InvalidData, what.to_string());
    let count = p.read_u32::<LE>()? as usize;
    let mut out = Vec::with_capacity(count.min(1 << 20));
    for _ in 0..count {
        let dim = p.read_u32::<LE>()? as usize;
        let mut rows = Vec::with_capacity(dim);
        for _ in 0..dim {
            let mut b = vec![0u8; ambient];
            p.read_exact(&mut b)?;
            if b.iter().any(|&x| x as usize >= f.order()) {
                return Err(bad("field element out of range"));
            }
            rows.push(b.into_iter().map(FieldElement::new).collect::<Vec<_>>());
        }
        let space = Subspace::from_rows(f, ambient, &rows).map_err(|e| bad(&e.to_string()))?;
        if space.basis() != rows.as_slice() {
            return Err(bad("stored basis is not in reduced echelon form"));
        }
        out.push(Flat { space, points: get_row(p)? });
    }
    Ok(out)
}

/// Parses the `META` section only.
pub fn read_meta(path: &Path) -> CliResult<CacheMeta> {
    let data = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let mut r = Reader { data: Cursor::new(&data), path };
    r.header()?;
    parse_meta(&mut r)
}

fn parse_meta(r: &mut Reader) -> CliResult<CacheMeta> {
    let mut p = r.section(b"META")?;
    let parsed = (|| -> std::io::Result<CacheMeta> {
        let spec = get_str(&mut p)?;
        let code_version = get_str(&mut p)?;
        let mut code = [0u32; 4];
        for x in &mut code {
            *x = p.read_u32::<LE>()?;
        }
        let mut v = [0usize; 8];
        for x in &mut v {
            *x = p.read_u32::<LE>()? as usize;
        }
        let kind = kind_of(code).ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidData, "geometry kind"))?;
        Ok(CacheMeta {
            spec,
            code_version,
            kind,
            type_index: v[0],
            line_size: v[1],
            self_typed: v[2] != 0,
            ambient_dim: v[3],
            q: v[4],
            num_points: v[5],
            num_vertices: v[6],
            num_objects: v[7],
        })
    })();
    parsed.or_else(|e| r.fail(format!("malformed META section: {e}")))
}

/// Parses a cache file and reassembles the instance. The file must have been
/// written for `spec` by this code version.
pub fn decode(path: &Path, data: &[u8], spec: &GeometrySpec) -> CliResult<Instance> {
    let mut r = Reader { data: Cursor::new(data), path };
    r.header()?;
    let meta = parse_meta(&mut r)?;
    if meta.spec != spec.to_string() {
        return r.fail(format!("written for {}, not {spec}", meta.spec));
    }
    if meta.code_version != CODE_VERSION {
        return r.fail(format!("written by version {}, this is {CODE_VERSION}", meta.code_version));
    }
    let ambient = spec.build_ambient()?;
    let field = match &ambient {
        geomcensus::grassmann::Ambient::Projective(p) => p.field_arc().clone(),
        geomcensus::grassmann::Ambient::Polar(p) => p.form().field_arc().clone(),
    };
    let malformed = |name: &str, e: std::io::Error| format!("malformed {name} section: {e}");

    let mut p = r.section(b"VERT")?;
    let vertices = match get_flats(&mut p, &field, meta.ambient_dim) {
        Ok(v) => v,
        Err(e) => return r.fail(malformed("VERT", e)),
    };
    let mut p = r.section(b"OBJS")?;
    let objects = match get_flats(&mut p, &field, meta.ambient_dim) {
        Ok(v) => v,
        Err(e) => return r.fail(malformed("OBJS", e)),
    };
    let mut p = r.section(b"LINE")?;
    let lines = (|| -> std::io::Result<Vec<Vec<usize>>> {
        let n = p.read_u32::<LE>()? as usize;
        (0..n)
            .map(|_| {
                let k = p.read_u32::<LE>()? as usize;
                (0..k).map(|_| p.read_u32::<LE>().map(|x| x as usize)).collect()
            })
            .collect()
    })();
    let lines = match lines {
        Ok(l) => l,
        Err(e) => return r.fail(malformed("LINE", e)),
    };
    let mut p = r.section(b"OPPR")?;
    let rows = (|| -> std::io::Result<Vec<BitRow>> {
        let n = p.read_u32::<LE>()? as usize;
        (0..n).map(|_| get_row(&mut p)).collect()
    })();
    let rows = match rows {
        Ok(v) => v,
        Err(e) => return r.fail(malformed("OPPR", e)),
    };
    r.section(b"END ")?;

    if vertices.len() != meta.num_vertices || rows.len() != meta.num_vertices {
        return r.fail("vertex count disagrees with the header");
    }
    let n_obj = if meta.self_typed { vertices.len() } else { objects.len() };
    if n_obj != meta.num_objects || rows.iter().any(|row| row.len() != n_obj) {
        return r.fail("object count disagrees with the header");
    }
    if lines.iter().flatten().any(|&v| v >= vertices.len()) {
        return r.fail("line refers to a missing vertex");
    }
    let ambient_points = match &ambient {
        geomcensus::grassmann::Ambient::Projective(p) => p.points().len(),
        geomcensus::grassmann::Ambient::Polar(p) => p.num_points(),
    };
    if vertices.iter().chain(&objects).any(|f| f.points.len() != ambient_points) {
        return r.fail("point sets do not match the rebuilt ambient space");
    }
    let objects = if meta.self_typed { vertices.clone() } else { objects };
    let opposition = OppositionContext::from_parts(objects, rows, meta.self_typed)?;
    let geometry = PointLineGeometry::from_parts(meta.kind, meta.type_index, vertices, lines, meta.line_size);
    Ok(Instance::from_parts(ambient, geometry, opposition))
}

pub fn save(path: &Path, spec: &GeometrySpec, inst: &Instance) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let tmp = path.with_extension(format!("{EXTENSION}.tmp"));
    let mut f = fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(&encode(spec, inst)).map_err(|e| CliError::io(&tmp, e))?;
    f.sync_all().map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

pub fn load(path: &Path, spec: &GeometrySpec) -> CliResult<Instance> {
    let data = fs::read(path).map_err(|e| CliError::io(path, e))?;
    decode(path, &data, spec)
}

/// How an instance was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Built,
    Cached,
    /// The existing file was unreadable or stale and has been rewritten.
    Rebuilt,
}

/// Loads the cached instance for `spec`, building and saving it when absent
/// or unusable. The size guard applies before any work.
pub fn load_or_build(dir: &Path, spec: &GeometrySpec, max_vertices: u128) -> CliResult<(Instance, PathBuf, Origin)> {
    spec.check(max_vertices)?;
    let path = path_for(dir, spec);
    let origin = if path.exists() {
        match load(&path, spec) {
            Ok(inst) => return Ok((inst, path, Origin::Cached)),
            Err(_) => Origin::Rebuilt,
        }
    } else {
        Origin::Built
    };
    let inst = spec.build(max_vertices)?;
    save(&path, spec, &inst)?;
    Ok((inst, path, origin))
}

/// A cache file with its header, or the reason it could not be read.
#[derive(Clone, Debug)]
pub struct Entry {
    pub path: PathBuf,
    pub bytes: u64,
    pub meta: Result<CacheMeta, String>,
}

pub fn list(dir: &Path) -> CliResult<Vec<Entry>> {
    if !dir.exists() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for e in fs::read_dir(dir).map_err(|e| CliError::io(dir, e))? {
        let path = e.map_err(|e| CliError::io(dir, e))?.path();
        if path.extension().is_some_and(|x| x == EXTENSION) {
            let bytes = fs::metadata(&path).map(|m| m.len()).unwrap_or(0);
            let meta = read_meta(&path).map_err(|e| e.to_string());
            out.push(Entry { path, bytes, meta });
        }
    }
    out.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(out)
}

/// Removes the entries for `spec` (any code version), or all entries.
pub fn remove(dir: &Path, spec: Option<&GeometrySpec>) -> CliResult<Vec<PathBuf>> {
    let want = spec.map(|s| s.to_string());
    let mut removed = Vec::new();
    for e in list(dir)? {
        let hit = match (&want, &e.meta) {
            (None, _) => true,
            (Some(w), Ok(m)) => &m.spec == w,
            (Some(_), Err(_)) => false,
        };
        if hit {
            fs::remove_file(&e.path).map_err(|err| CliError::io(&e.path, err))?;
            removed.push(e.path);
        }
    }
    Ok(removed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn same(a: &Instance, b: &Instance) {
        assert_eq!(a.geometry.kind(), b.geometry.kind());
        assert_eq!(a.geometry.type_index(), b.geometry.type_index());
        assert_eq!(a.geometry.line_size(), b.geometry.line_size());
        assert_eq!(a.geometry.vertices(), b.geometry.vertices());
        assert_eq!(a.geometry.lines(), b.geometry.lines());
        assert_eq!(a.opposition.objects(), b.opposition.objects());
        assert_eq!(a.opposition.rows(), b.opposition.rows());
        assert_eq!(a.opposition.is_self_typed(), b.opposition.is_self_typed());
        for o in 0..a.opposition.num_objects() {
            assert_eq!(a.opposition.column(o), b.opposition.column(o));
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        for s in ["PG(3,2) i=2", "W(3,2)", "H(3,4)", "Q(4,2) i=2", "Q+(5,2) halfspin:A", "Q-(5,2) i=2", "W(5,2) i=2"] {
            let spec: GeometrySpec = s.parse().unwrap();
            let inst = spec.build(100_000).unwrap();
            let path = path_for(dir.path(), &spec);
            save(&path, &spec, &inst).unwrap();
            let back = load(&path, &spec).unwrap();
            same(&inst, &back);
            assert_eq!(encode(&spec, &back), fs::read(&path).unwrap(), "{s}");
        }
    }

    #[test]
    fn detects_corruption_and_staleness() {
        let dir = tempfile::tempdir().unwrap();
        let spec: GeometrySpec = "W(3,2)".parse().unwrap();
        let inst = spec.build(100_000).unwrap();
        let path = path_for(dir.path(), &spec);
        save(&path, &spec, &inst).unwrap();
        let good = fs::read(&path).unwrap();

        let mut bad = good.clone();
        let last = bad.len() - 30;
        bad[last] ^= 1;
        let err = decode(&path, &bad, &spec).unwrap_err().to_string();
        assert!(err.contains("checksum mismatch"), "{err}");

        let err = decode(&path, &good[..good.len() / 2], &spec).unwrap_err().to_string();
        assert!(err.contains("truncated") || err.contains("missing"), "{err}");

        let err = decode(&path, b"something else", &spec).unwrap_err().to_string();
        assert!(err.contains("not a geometry cache"), "{err}");

        let other: GeometrySpec = "W(3,2) i=1".parse().unwrap();
        let err = decode(&path, &good, &other).unwrap_err().to_string();
        assert!(err.contains("written for W(3,2)"), "{err}");
    }

    #[test]
    fn load_or_build_is_idempotent() {
        let dir = tempfile::tempdir().unwrap();
        let spec: GeometrySpec = "Q+(5,2) halfspin:B".parse().unwrap();
        let (a, path, o1) = load_or_build(dir.path(), &spec, 100_000).unwrap();
        let first = fs::read(&path).unwrap();
        let (b, _, o2) = load_or_build(dir.path(), &spec, 100_000).unwrap();
        assert_eq!((o1, o2), (Origin::Built, Origin::Cached));
        same(&a, &b);
        assert_eq!(first, fs::read(&path).unwrap());

        fs::write(&path, b"junk").unwrap();
        let (_, _, o3) = load_or_build(dir.path(), &spec, 100_000).unwrap();
        assert_eq!(o3, Origin::Rebuilt);
        assert_eq!(first, fs::read(&path).unwrap());

        let entries = list(dir.path()).unwrap();
        assert_eq!(entries.len(), 1);
        let meta = entries[0].meta.as_ref().unwrap();
        assert_eq!((meta.spec.as_str(), meta.num_vertices), ("Q+(5,2) halfspin:B", 15));
        assert_eq!(remove(dir.path(), Some(&"W(3,2)".parse().unwrap())).unwrap().len(), 0);
        assert_eq!(remove(dir.path(), Some(&spec)).unwrap().len(), 1);
        assert!(list(dir.path()).unwrap().is_empty());
    }

    #[test]
    fn guard_runs_before_building() {
        let dir = tempfile::tempdir().unwrap();
        let spec: GeometrySpec = "W(3,2)".parse().unwrap();
        assert!(matches!(load_or_build(dir.path(), &spec, 10), Err(CliError::OverLimit { .. })));
        assert!(list(dir.path()).unwrap().is_empty());
    }

    #[test]
    fn file_names_are_distinct() {
        let names: std::collections::HashSet<String> = ["W(3,2)", "W(3,2) i=1", "Q+(5,2) halfspin:A", "Q-(5,2)", "Q(4,2)"]
            .iter()
            .map(|s| file_name(&s.parse().unwrap()))
            .collect();
        assert_eq!(names.len(), 5);
        assert!(file_name(&"Q+(5,2) halfspin:A".parse().unwrap()).starts_with("Qp_5_2__halfspin_A-"));
    }
}
