//! Line-oriented text format for spaces, maps and pipelines.
//!
//! ```text
//! # comments run to end of line
//! space p
//! a 1/2
//! b 1/2
//!
//! space q
//! c 1
//!
//! map collapse : p -> q
//! a -> c
//! b -> c
//!
//! include more-spaces.txt
//!
//! pipeline two-stage
//! stage coarsen.map
//! stage collapse.map collapse
//! ```
//!
//! Weights are exact: `0`, an integer, `num/den`, or a finite decimal. A
//! codomain weight may be written `?` (or left out) only when the codomain is
//! inferred from the pushforward; stated weights are always checked.
//!
//! [`Document::to_canonical_string`] writes blocks in declaration order,
//! weights in lowest terms, one blank line between blocks and no comments.
//! Parsing a canonical document and writing it again is byte-identical.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::error::MeasureError;
use crate::map::MeasurePreservingMap;
use crate::space::FiniteMeasureSpace;
use crate::weight::Weight;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{file}: {source}")]
    InFile {
        file: String,
        #[source]
        source: Box<FormatError>,
    },
    #[error("`{0}` is declared twice")]
    DuplicateName(String),
    #[error("unknown space `{0}`")]
    UnknownSpace(String),
    #[error("unknown map `{0}`")]
    UnknownMap(String),
    #[error("{0}")]
    NoMap(String),
    #[error("space `{space}` leaves the weight of `{label}` unstated")]
    MissingWeight { space: String, label: String },
    #[error("pipeline has no stages")]
    EmptyPipeline,
    #[error("include cycle through {0}")]
    IncludeCycle(String),
    #[error("space `{name}`: {source}")]
    InvalidSpace {
        name: String,
        #[source]
        source: MeasureError,
    },
    #[error("map `{name}`: {source}")]
    InvalidMap {
        name: String,
        #[source]
        source: MeasureError,
    },
}

impl FormatError {
    /// True for documents that parse but describe invalid measures or maps.
    pub fn is_validation(&self) -> bool {
        match self {
            FormatError::InvalidSpace { .. } | FormatError::InvalidMap { .. } => true,
            FormatError::InFile { source, .. } => source.is_validation(),
            _ => false,
        }
    }

    fn in_file(self, path: &Path) -> FormatError {
        match self {
            e @ FormatError::InFile { .. } | e @ FormatError::Io { .. } => e,
            other => FormatError::InFile {
                file: path.display().to_string(),
                source: Box::new(other),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDecl {
    pub name: String,
    pub points: Vec<(String, Option<Weight>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDecl {
    pub name: String,
    pub domain: String,
    pub codomain: String,
    pub pairs: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageDecl {
    pub path: String,
    pub map: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineDecl {
    pub name: String,
    pub stages: Vec<StageDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    Space(SpaceDecl),
    Map(MapDecl),
    Include(String),
    Pipeline(PipelineDecl),
}

/// A parsed document, blocks in source order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub blocks: Vec<Block>,
}

fn is_token(s: &str) -> bool {
    !s.is_empty() && s != "->" && !s.contains(|c: char| c.is_whitespace() || c == '#' || c == ':')
}

fn check_token(s: &str, line: usize, what: &str) -> Result<String, FormatError> {
    if is_token(s) {
        Ok(s.to_string())
    } else {
        Err(FormatError::Syntax {
            line,
            message: format!("invalid {what} `{s}`"),
        })
    }
}

impl Document {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut blocks: Vec<Block> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |message: String| FormatError::Syntax { line, message };
            let words: Vec<&str> = content.split_whitespace().collect();
            match words[0] {
                "space" => {
                    if words.len() != 2 {
                        return Err(syntax("expected `space <name>`".into()));
                    }
                    blocks.push(Block::Space(SpaceDecl {
                        name: check_token(words[1], line, "space name")?,
                        points: Vec::new(),
                    }));
                }
                "map" => {
                    if words.len() != 6 || words[2] != ":" || words[4] != "->" {
                        return Err(syntax(
                            "expected `map <name> : <domain> -> <codomain>`".into(),
                        ));
                    }
                    blocks.push(Block::Map(MapDecl {
                        name: check_token(words[1], line, "map name")?,
                        domain: check_token(words[3], line, "space name")?,
                        codomain: check_token(words[5], line, "space name")?,
                        pairs: Vec::new(),
                    }));
                }
                "include" => {
                    if words.len() != 2 {
                        return Err(syntax("expected `include <path>`".into()));
                    }
                    blocks.push(Block::Include(words[1].to_string()));
                }
                "pipeline" => {
                    if words.len() != 2 {
                        return Err(syntax("expected `pipeline <name>`".into()));
                    }
                    blocks.push(Block::Pipeline(PipelineDecl {
                        name: check_token(words[1], line, "pipeline name")?,
                        stages: Vec::new(),
                    }));
                }
                _ => match blocks.last_mut() {
                    Some(Block::Space(space)) => {
                        let weight = match words.as_slice() {
                            [_] => None,
                            [_, "?"] => None,
                            [_, w] => Some(
                                w.parse::<Weight>()
                                    .map_err(|e| syntax(format!("point `{}`: {e}", words[0])))?,
                            ),
                            _ => return Err(syntax("expected `<label> <weight>`".into())),
                        };
                        space
                            .points
                            .push((check_token(words[0], line, "label")?, weight));
                    }
                    Some(Block::Map(map)) => {
                        if words.len() != 3 || words[1] != "->" {
                            return Err(syntax("expected `<label> -> <label>`".into()));
                        }
                        map.pairs.push((
                            check_token(words[0], line, "label")?,
                            check_token(words[2], line, "label")?,
                        ));
                    }
                    Some(Block::Pipeline(pipeline)) => {
                        let stage = match words.as_slice() {
                            ["stage", path] => StageDecl {
                                path: path.to_string(),
                                map: None,
                            },
                            ["stage", path, name] => StageDecl {
                                path: path.to_string(),
                                map: Some(check_token(name, line, "map name")?),
                            },
                            _ => return Err(syntax("expected `stage <path> [<map>]`".into())),
                        };
                        pipeline.stages.push(stage);
                    }
                    _ => return Err(syntax(format!("unexpected `{content}` outside a block"))),
                },
            }
        }
        Ok(Document { blocks })
    }

    pub fn push_space(&mut self, name: &str, space: &FiniteMeasureSpace) -> &mut Self {
        self.blocks.push(Block::Space(SpaceDecl {
            name: name.to_string(),
            points: space
                .iter()
                .map(|(l, w)| (l.to_string(), Some(w.clone())))
                .collect(),
        }));
        self
    }

    /// Appends `map` as a map block between two already-declared spaces.
    pub fn push_map(
        &mut self,
        name: &str,
        domain: &str,
        codomain: &str,
        map: &MeasurePreservingMap,
    ) -> &mut Self {
        self.blocks.push(Block::Map(MapDecl {
            name: name.to_string(),
            domain: domain.to_string(),
            codomain: codomain.to_string(),
            pairs: map
                .pairs()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        }));
        self
    }

    /// Appends a self-contained map: its domain and codomain spaces, then the map.
    pub fn push_map_with_spaces(&mut self, name: &str, map: &MeasurePreservingMap) -> &mut Self {
        let (dom, cod) = (format!("{name}-domain"), format!("{name}-codomain"));
        self.push_space(&dom, map.domain())
            .push_space(&cod, map.codomain())
            .push_map(name, &dom, &cod, map)
    }

    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            match block {
                Block::Space(s) => {
                    let _ = writeln!(out, "space {}", s.name);
                    for (label, w) in &s.points {
                        match w {
                            Some(w) => {
                                let _ = writeln!(out, "{label} {w}");
                            }
                            None => {
                                let _ = writeln!(out, "{label} ?");
                            }
                        }
                    }
                }
                Block::Map(m) => {
                    let _ = writeln!(out, "map {} : {} -> {}", m.name, m.domain, m.codomain);
                    for (a, b) in &m.pairs {
                        let _ = writeln!(out, "{a} -> {b}");
                    }
                }
                Block::Include(path) => {
                    let _ = writeln!(out, "include {path}");
                }
                Block::Pipeline(p) => {
                    let _ = writeln!(out, "pipeline {}", p.name);
                    for stage in &p.stages {
                        match &stage.map {
                            Some(m) => {
                                let _ = writeln!(out, "stage {} {m}", stage.path);
                            }
                            None => {
                                let _ = writeln!(out, "stage {}", stage.path);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn space_decls(&self) -> impl Iterator<Item = &SpaceDecl> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Space(s) => Some(s),
            _ => None,
        })
    }

    pub fn map_decls(&self) -> impl Iterator<Item = &MapDecl> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Map(m) => Some(m),
            _ => None,
        })
    }

    pub fn pipelines(&self) -> impl Iterator<Item = &PipelineDecl> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Pipeline(p) => Some(p),
            _ => None,
        })
    }
}

/// Spaces and maps visible from a document, including everything it
/// transitively includes.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    spaces: HashMap<String, SpaceDecl>,
    maps: HashMap<String, MapDecl>,
    /// Maps and spaces declared by the root document itself, in order.
    own_spaces: Vec<String>,
    own_maps: Vec<String>,
    pipelines: Vec<PipelineDecl>,
    base_dir: PathBuf,
}

impl Scope {
    /// Builds a scope from an in-memory document; includes are not allowed.
    pub fn from_document(doc: &Document) -> Result<Self, FormatError> {
        let mut scope = Scope::default();
        scope.absorb(doc, true, None, &mut Vec::new())?;
        Ok(scope)
    }

    pub fn load(path: &Path) -> Result<Self, FormatError> {
        let mut scope = Scope {
            base_dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
            ..Scope::default()
        };
        let mut stack = Vec::new();
        scope.load_file(path, true, &mut stack)?;
        Ok(scope)
    }

    fn load_file(
        &mut self,
        path: &Path,
        own: bool,
        stack: &mut Vec<PathBuf>,
    ) -> Result<(), FormatError> {
        let key = fs::canonicalize(path).unwrap_or_else(|_| path.to_path_buf());
        if stack.contains(&key) {
            return Err(FormatError::IncludeCycle(path.display().to_string()));
        }
        let text = fs::read_to_string(path).map_err(|e| FormatError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let doc = Document::parse(&text).map_err(|e| e.in_file(path))?;
        stack.push(key);
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let result = self
            .absorb(&doc, own, Some(&dir), stack)
            .map_err(|e| e.in_file(path));
        stack.pop();
        result
    }

    fn absorb(
        &mut self,
        doc: &Document,
        own: bool,
        dir: Option<&Path>,
        stack: &mut Vec<PathBuf>,
    ) -> Result<(), FormatError> {
        let mut seen: HashSet<String> = HashSet::new();
        for block in &doc.blocks {
            match block {
                Block::Space(s) => {
                    if !seen.insert(format!("space {}", s.name))
                        || self.spaces.insert(s.name.clone(), s.clone()).is_some()
                    {
                        return Err(FormatError::DuplicateName(s.name.clone()));
                    }
                    if own {
                        self.own_spaces.push(s.name.clone());
                    }
                }
                Block::Map(m) => {
                    if !seen.insert(format!("map {}", m.name))
                        || self.maps.insert(m.name.clone(), m.clone()).is_some()
                    {
                        return Err(FormatError::DuplicateName(m.name.clone()));
                    }
                    if own {
                        self.own_maps.push(m.name.clone());
                    }
                }
                Block::Include(path) => {
                    let dir = dir.ok_or_else(|| FormatError::Io {
                        path: path.clone(),
                        message: "includes need a file on disk".into(),
                    })?;
                    self.load_file(&dir.join(path), false, stack)?;
                }
                Block::Pipeline(p) => {
                    if own {
                        self.pipelines.push(p.clone());
                    }
                }
            }
        }
        Ok(())
    }

    /// Names of the spaces declared in the root document.
    pub fn space_names(&self) -> &[String] {
        &self.own_spaces
    }

    /// Names of the maps declared in the root document.
    pub fn map_names(&self) -> &[String] {
        &self.own_maps
    }

    pub fn pipelines(&self) -> &[PipelineDecl] {
        &self.pipelines
    }

    pub fn base_dir(&self) -> &Path {
        &self.base_dir
    }

    /// A fully-weighted space.
    pub fn space(&self, name: &str) -> Result<FiniteMeasureSpace, FormatError> {
        let decl = self
            .spaces
            .get(name)
            .ok_or_else(|| FormatError::UnknownSpace(name.to_string()))?;
        let mut weights = Vec::with_capacity(decl.points.len());
        for (label, w) in &decl.points {
            weights.push(w.clone().ok_or_else(|| FormatError::MissingWeight {
                space: name.to_string(),
                label: label.clone(),
            })?);
        }
        FiniteMeasureSpace::new(decl.points.iter().map(|(l, _)| l.clone()), weights).map_err(
            |source| FormatError::InvalidSpace {
                name: name.to_string(),
                source,
            },
        )
    }

    /// Resolves and validates a map. With `infer_codomain`, unstated codomain
    /// weights are filled in from the pushforward; stated ones must still match.
    pub fn map(
        &self,
        name: &str,
        infer_codomain: bool,
    ) -> Result<MeasurePreservingMap, FormatError> {
        let decl = self
            .maps
            .get(name)
            .ok_or_else(|| FormatError::UnknownMap(name.to_string()))?;
        let domain = self.space(&decl.domain)?;
        let invalid = |source| FormatError::InvalidMap {
            name: name.to_string(),
            source,
        };
        if !infer_codomain {
            let codomain = self.space(&decl.codomain)?;
            return MeasurePreservingMap::new(domain, codomain, decl.pairs.iter().cloned())
                .map_err(invalid);
        }
        let cod_decl = self
            .spaces
            .get(&decl.codomain)
            .ok_or_else(|| FormatError::UnknownSpace(decl.codomain.clone()))?;
        let labels: Vec<String> = cod_decl.points.iter().map(|(l, _)| l.clone()).collect();
        // Validate labels and the assignment, then derive the weights.
        let placeholder =
            FiniteMeasureSpace::new(labels.clone(), vec![Weight::zero(); labels.len()]).map_err(
                |source| FormatError::InvalidSpace {
                    name: decl.codomain.clone(),
                    source,
                },
            )?;
        let mut targets: Vec<Option<usize>> = vec![None; domain.len()];
        for (from, to) in &decl.pairs {
            let i = domain
                .index_of(from)
                .ok_or_else(|| invalid(MeasureError::UnknownSource(from.clone())))?;
            let j = placeholder.index_of(to).ok_or_else(|| {
                invalid(MeasureError::TargetNotInCodomain {
                    source_label: from.clone(),
                    target: to.clone(),
                })
            })?;
            if let Some(prev) = targets[i] {
                if prev != j {
                    return Err(invalid(MeasureError::ConflictingAssignment {
                        source_label: from.clone(),
                        first: labels[prev].clone(),
                        second: to.clone(),
                    }));
                }
            }
            targets[i] = Some(j);
        }
        let assignment = targets
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                t.ok_or_else(|| invalid(MeasureError::UnmappedPoint(domain.labels()[i].clone())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let inferred =
            MeasurePreservingMap::with_pushforward(domain, labels, assignment).map_err(invalid)?;
        for ((label, stated), pushed) in cod_decl.points.iter().zip(inferred.codomain().weights()) {
            if let Some(stated) = stated {
                if stated != pushed {
                    return Err(invalid(MeasureError::PushforwardMismatch {
                        label: label.clone(),
                        stated: stated.to_string(),
                        pushed: pushed.to_string(),
                    }));
                }
            }
        }
        Ok(inferred)
    }

    /// The maps declared in the root document, in order.
    pub fn own_maps(
        &self,
        infer_codomain: bool,
    ) -> Result<Vec<(String, MeasurePreservingMap)>, FormatError> {
        self.own_maps
            .iter()
            .map(|n| Ok((n.clone(), self.map(n, infer_codomain)?)))
            .collect()
    }
}

/// A named pipeline stage after loading.
#[derive(Clone, Debug)]
pub struct Stage {
    pub name: String,
    pub map: MeasurePreservingMap,
}

/// Loads the stages of the first pipeline declared in `path`. Stage paths
/// are relative to the pipeline file.
pub fn load_pipeline(
    path: &Path,
    infer_codomain: bool,
) -> Result<(String, Vec<Stage>), FormatError> {
    let scope = Scope::load(path)?;
    let pipeline = scope
        .pipelines()
        .first()
        .cloned()
        .ok_or_else(|| FormatError::EmptyPipeline.in_file(path))?;
    if pipeline.stages.is_empty() {
        return Err(FormatError::EmptyPipeline.in_file(path));
    }
    let mut stages = Vec::with_capacity(pipeline.stages.len());
    for stage in &pipeline.stages {
        let stage_path = scope.base_dir().join(&stage.path);
        let stage_scope = Scope::load(&stage_path)?;
        let name = match &stage.map {
            Some(name) => name.clone(),
            None => match stage_scope.map_names() {
                [only] => only.clone(),
                names => {
                    return Err(FormatError::NoMap(format!(
                        "{} declares {} maps; name the one to use",
                        stage_path.display(),
                        names.len()
                    ))
                    .in_file(path))
                }
            },
        };
        let map = stage_scope
            .map(&name, infer_codomain)
            .map_err(|e| e.in_file(&stage_path))?;
        stages.push(Stage { name, map });
    }
    Ok((pipeline.name, stages))
}

#[cfg(test)]
mod tests {
    use super::*;

    const COLLAPSE: &str =
        "space p\na 1/2\nb 1/2\n\nspace q\nc 1\n\nmap collapse : p -> q\na -> c\nb -> c\n";

    #[test]
    fn canonical_round_trip_is_byte_identical() {
        let doc = Document::parse(COLLAPSE).unwrap();
        assert_eq!(doc.to_canonical_string(), COLLAPSE);
    }

    #[test]
    fn comments_and_spacing_are_normalised() {
        let messy = "# header\nspace p   # trailing\n  a   2/4\nb 0.5\nspace q\nc 1\nmap collapse : p -> q\na -> c\n\n\nb -> c\n";
        let doc = Document::parse(messy).unwrap();
        assert_eq!(doc.to_canonical_string(), COLLAPSE);
    }

    #[test]
    fn resolves_maps() {
        let scope = Scope::from_document(&Document::parse(COLLAPSE).unwrap()).unwrap();
        let f = scope.map("collapse", false).unwrap();
        assert_eq!(f.image_of("a"), Some("c"));
        assert_eq!(scope.map_names(), ["collapse"]);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = Document::parse("space p\na 1/2 extra\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 2, .. }));
        let err = Document::parse("a 1/2\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 1, .. }));
        let err = Document::parse("map f p -> q\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 1, .. }));
        let err = Document::parse("space p\na -1/2\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 2, .. }));
    }

    #[test]
    fn pushforward_mismatch_is_a_validation_error() {
        let text = COLLAPSE.replace("c 1", "c 1/2");
        let scope = Scope::from_document(&Document::parse(&text).unwrap()).unwrap();
        let err = scope.map("collapse", false).unwrap_err();
        assert!(err.is_validation());
        assert!(err.to_string().contains("1/2") && err.to_string().contains("pushforward 1"));
    }

    #[test]
    fn inferred_codomain() {
        let text = "space p\na 1/4\nb 3/4\nspace q\nc ?\nd\nmap f : p -> q\na -> c\nb -> c\n";
        let scope = Scope::from_document(&Document::parse(text).unwrap()).unwrap();
        assert!(matches!(
            scope.map("f", false).unwrap_err(),
            FormatError::MissingWeight { .. }
        ));
        let f = scope.map("f", true).unwrap();
        assert_eq!(f.codomain().weight_of("c"), Some(&Weight::one()));
        assert_eq!(f.codomain().weight_of("d"), Some(&Weight::zero()));

        let wrong = "space p\na 1/4\nb 3/4\nspace q\nc 1/2\nmap f : p -> q\na -> c\nb -> c\n";
        let scope = Scope::from_document(&Document::parse(wrong).unwrap()).unwrap();
        assert!(scope.map("f", true).unwrap_err().is_validation());
    }

    #[test]
    fn duplicate_names_and_unknown_spaces() {
        let text = "space p\na 1\nspace p\nb 1\n";
        assert_eq!(
            Scope::from_document(&Document::parse(text).unwrap()).unwrap_err(),
            FormatError::DuplicateName("p".into())
        );
        let text = "space p\na 1\nmap f : p -> nowhere\na -> a\n";
        let scope = Scope::from_document(&Document::parse(text).unwrap()).unwrap();
        assert_eq!(
            scope.map("f", false).unwrap_err(),
            FormatError::UnknownSpace("nowhere".into())
        );
    }

    #[test]
    fn builder_output_parses_back() {
        let p = FiniteMeasureSpace::parse(&["a", "b", "c"], &["1/3", "0", "2/3"]).unwrap();
        let f = MeasurePreservingMap::terminal(&p);
        let mut doc = Document::new();
        doc.push_map_with_spaces("bang", &f);
        let text = doc.to_canonical_string();
        let scope = Scope::from_document(&Document::parse(&text).unwrap()).unwrap();
        assert_eq!(scope.map("bang", false).unwrap(), f);
    }
}
