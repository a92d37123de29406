//! Game graphs, structural validation, generators and JSON I/O.

use std::collections::VecDeque;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A position together with both players' budgets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub vertex: VertexId,
    pub b1: usize,
    pub b2: usize,
}

impl Configuration {
    pub fn new(vertex: VertexId, b1: usize, b2: usize) -> Self {
        Configuration { vertex, b1, b2 }
    }
}

/// A reachability bidding game: a directed graph with a target and a sink.
///
/// Successor lists are sorted and free of duplicates. A `Game` built with
/// [`Game::from_parts`] may violate the structural rules; [`Game::new`]
/// rejects such graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    names: Vec<String>,
    succ: Vec<Vec<VertexId>>,
    target: VertexId,
    sink: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    TargetIsSink,
    TargetHasSuccessors,
    SinkHasSuccessors,
    NoSuccessors,
    NoPathToTarget,
    NoPathToSink,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub vertex: VertexId,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.rule {
            Rule::TargetIsSink => "target and sink coincide",
            Rule::TargetHasSuccessors => "target has outgoing edges",
            Rule::SinkHasSuccessors => "sink has outgoing edges",
            Rule::NoSuccessors => "vertex has no outgoing edges",
            Rule::NoPathToTarget => "no path to the target",
            Rule::NoPathToSink => "no path to the sink",
        };
        write!(f, "vertex {}: {what}", self.vertex.0)
    }
}

impl Game {
    /// Builds a game and checks every structural rule.
    pub fn new(
        names: Vec<String>,
        edges: &[(usize, usize)],
        target: usize,
        sink: usize,
    ) -> Result<Game> {
        let g = Game::from_parts(names, edges, target, sink)?;
        let violations = validate_game(&g);
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidGame(violations))
        }
    }

    /// Builds a game, rejecting only out-of-range indices.
    pub fn from_parts(
        names: Vec<String>,
        edges: &[(usize, usize)],
        target: usize,
        sink: usize,
    ) -> Result<Game> {
        let n = names.len();
        let in_range = |i: usize| {
            if i < n {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "vertex index {i} out of range for {n} vertices"
                )))
            }
        };
        in_range(target)?;
        in_range(sink)?;
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in edges {
            in_range(a)?;
            in_range(b)?;
            succ[a].push(VertexId(b));
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        Ok(Game {
            names,
            succ,
            target: VertexId(target),
            sink: VertexId(sink),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.names.len()).map(VertexId)
    }

    /// Vertices other than the target and the sink.
    pub fn interior(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(move |&v| !self.is_leaf(v))
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn sink(&self) -> VertexId {
        self.sink
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        v == self.target || v == self.sink
    }

    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.succ[v.0]
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.names.iter().position(|n| n == name).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices()
            .flat_map(move |v| self.succ[v.0].iter().map(move |&u| (v, u)))
    }

    pub fn is_dag(&self) -> bool {
        topological_order(self).is_ok()
    }

    pub fn from_json(text: &str) -> Result<Game> {
        let file: GameFile = serde_json::from_str(text)?;
        let edges: Vec<(usize, usize)> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        Game::new(file.vertices, &edges, file.target, file.sink)
    }

    pub fn to_json(&self) -> String {
        let file = GameFile {
            vertices: self.names.clone(),
            edges: self.edges().map(|(a, b)| [a.0, b.0]).collect(),
            target: self.target.0,
            sink: self.sink.0,
        };
        serde_json::to_string_pretty(&file).expect("game serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Game> {
        Game::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    fn reaches(&self, goal: VertexId) -> Vec<bool> {
        let mut pred = vec![Vec::new(); self.vertex_count()];
        for (a, b) in self.edges() {
            pred[b.0].push(a);
        }
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([goal]);
        seen[goal.0] = true;
        while let Some(v) = queue.pop_front() {
            for &p in &pred[v.0] {
                if !seen[p.0] {
                    seen[p.0] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }
}

#[derive(Serialize, Deserialize)]
struct GameFile {
    vertices: Vec<String>,
    edges: Vec<[usize; 2]>,
    target: usize,
    sink: usize,
}

/// Lists every structural rule the game breaks; empty means valid.
pub fn validate_game(g: &Game) -> Vec<Violation> {
    let mut out = Vec::new();
    if g.target == g.sink {
        out.push(Violation {
            vertex: g.target,
            rule: Rule::TargetIsSink,
        });
        return out;
    }
    if !g.successors(g.target).is_empty() {
        out.push(Violation {
            vertex: g.target,
            rule: Rule::TargetHasSuccessors,
        });
    }
    if !g.successors(g.sink).is_empty() {
        out.push(Violation {
            vertex: g.sink,
            rule: Rule::SinkHasSuccessors,
        });
    }
    let to_target = g.reaches(g.target);
    let to_sink = g.reaches(g.sink);
    for v in g.interior() {
        if g.successors(v).is_empty() {
            out.push(Violation {
                vertex: v,
                rule: Rule::NoSuccessors,
            });
            continue;
        }
        if !to_target[v.0] {
            out.push(Violation {
                vertex: v,
                rule: Rule::NoPathToTarget,
            });
        }
        if !to_sink[v.0] {
            out.push(Violation {
                vertex: v,
                rule: Rule::NoPathToSink,
            });
        }
    }
    out
}

/// Orders vertices so every vertex comes after all its successors,
/// starting with the target and the sink.
pub fn topological_order(g: &Game) -> Result<Vec<VertexId>> {
    let n = g.vertex_count();
    let mut pred = vec![Vec::new(); n];
    let mut remaining: Vec<usize> = (0..n).map(|v| g.succ[v].len()).collect();
    for (a, b) in g.edges() {
        pred[b.0].push(a);
    }
    let mut queue = VecDeque::new();
    for v in [g.target, g.sink] {
        if remaining[v.0] == 0 && !queue.contains(&v) {
            queue.push_back(v);
        }
    }
    for v in g.vertices() {
        if remaining[v.0] == 0 && !queue.contains(&v) {
            queue.push_back(v);
        }
    }
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &p in &pred[v.0] {
            remaining[p.0] -= 1;
            if remaining[p.0] == 0 {
                queue.push_back(p);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err(Error::NotDag)
    }
}

/// Longest path length (in edges) from each vertex to a leaf.
pub fn max_paths(g: &Game) -> Result<Vec<usize>> {
    let mut len = vec![0usize; g.vertex_count()];
    for v in topological_order(g)? {
        len[v.0] = g
            .successors(v)
            .iter()
            .map(|u| len[u.0] + 1)
            .max()
            .unwrap_or(0);
    }
    Ok(len)
}

pub fn max_path(g: &Game, v: VertexId) -> Result<usize> {
    Ok(max_paths(g)?[v.0])
}

/// Longest simple path (in edges) from each vertex to a leaf.
///
/// Agrees with [`max_paths`] on DAGs. Enumerates simple paths, so the cost
/// is exponential in the worst case; meant for small cyclic games.
pub fn longest_simple_paths(g: &Game) -> Vec<usize> {
    fn walk(g: &Game, v: VertexId, on_path: &mut [bool]) -> Option<usize> {
        if g.is_leaf(v) {
            return Some(0);
        }
        on_path[v.0] = true;
        let mut best = None;
        for &u in g.successors(v) {
            if !on_path[u.0] {
                best = best.max(walk(g, u, on_path).map(|l| l + 1));
            }
        }
        on_path[v.0] = false;
        best
    }
    let mut on_path = vec![false; g.vertex_count()];
    g.vertices()
        .map(|v| walk(g, v, &mut on_path).unwrap_or(0))
        .collect()
}

fn leaves() -> Vec<String> {
    vec!["t".to_string(), "s".to_string()]
}

/// Name of the race vertex where Player 1 needs `x` wins and Player 2 `y`.
pub fn race_name(x: usize, y: usize) -> String {
    format!("v_{{{x},{y}}}")
}

/// The race in which Player 1 must win `a` biddings before Player 2 wins `b`.
///
/// Vertex `v_{x,y}` moves to `v_{x-1,y}` and `v_{x,y-1}`; reaching `x = 0`
/// means the target, reaching `y = 0` the sink.
pub fn gen_race(a: usize, b: usize) -> Result<Game> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidArgument("race sizes must be positive".into()));
    }
    let mut names = leaves();
    let id = |x: usize, y: usize| 2 + (x - 1) * b + (y - 1);
    let mut edges = Vec::new();
    for x in 1..=a {
        for y in 1..=b {
            names.push(race_name(x, y));
            let me = id(x, y);
            edges.push((me, if x == 1 { 0 } else { id(x - 1, y) }));
            edges.push((me, if y == 1 { 1 } else { id(x, y - 1) }));
        }
    }
    Game::new(names, &edges, 0, 1)
}

/// Tug of war on `n` interior vertices `v_0 .. v_{n-1}` on a line, with the
/// sink beyond `v_0` and the target beyond `v_{n-1}`.
pub fn gen_tow(n: usize) -> Result<Game> {
    if n == 0 {
        return Err(Error::InvalidArgument("tug of war needs a vertex".into()));
    }
    let mut names = leaves();
    names.extend((0..n).map(|i| format!("v_{i}")));
    let mut edges = Vec::new();
    for i in 0..n {
        let me = 2 + i;
        edges.push((me, if i == 0 { 1 } else { me - 1 }));
        edges.push((me, if i + 1 == n { 0 } else { me + 1 }));
    }
    Game::new(names, &edges, 0, 1)
}

/// A fresh vertex `root` with an edge to the initial vertex of each child.
///
/// Children share the target and sink; their other vertices are renamed with
/// a `c{i}/` prefix. A child's initial vertex is its first interior vertex
/// without predecessors, or its first interior vertex if every one has some.
pub fn gen_choice(children: &[Game]) -> Result<Game> {
    if children.is_empty() {
        return Err(Error::InvalidArgument("choice needs a child".into()));
    }
    let mut names = leaves();
    names.push("root".into());
    let mut edges = Vec::new();
    for (i, child) in children.iter().enumerate() {
        let mut map = vec![usize::MAX; child.vertex_count()];
        map[child.target.0] = 0;
        map[child.sink.0] = 1;
        for v in child.interior() {
            map[v.0] = names.len();
            names.push(format!("c{i}/{}", child.name(v)));
        }
        let Some(start) = initial_vertex(child) else {
            return Err(Error::InvalidArgument(
                "choice child has no interior".into(),
            ));
        };
        edges.push((2, map[start.0]));
        edges.extend(child.edges().map(|(a, b)| (map[a.0], map[b.0])));
    }
    Game::new(names, &edges, 0, 1)
}

fn initial_vertex(g: &Game) -> Option<VertexId> {
    let mut entered = vec![false; g.vertex_count()];
    for (_, b) in g.edges() {
        entered[b.0] = true;
    }
    g.interior()
        .find(|v| !entered[v.0])
        .or_else(|| g.interior().next())
}

/// A cyclic game whose thresholds leave the pipe around the continuous ratios.
///
/// Vertices are named `0..=5`; `0` is the sink and `5` the target.
pub fn gen_pipe_violation() -> Game {
    let names = (0..6).map(|i| i.to_string()).collect();
    let edges = [
        (1, 0),
        (1, 2),
        (2, 1),
        (1, 3),
        (2, 3),
        (3, 2),
        (3, 4),
        (4, 3),
        (4, 5),
    ];
    Game::new(names, &edges, 5, 0).expect("fixed game is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn race_shape() {
        let g = gen_race(2, 3).unwrap();
        assert_eq!(g.vertex_count(), 2 + 6);
        let v = g.vertex("v_{1,1}").unwrap();
        assert_eq!(g.successors(v), &[g.target(), g.sink()]);
        let top = g.vertex("v_{2,3}").unwrap();
        let names: Vec<_> = g.successors(top).iter().map(|&u| g.name(u)).collect();
        assert_eq!(names, ["v_{1,3}", "v_{2,2}"]);
        assert_eq!(max_path(&g, top).unwrap(), 2 + 3 - 1);
    }

    #[test]
    fn tow_is_cyclic_line() {
        let g = gen_tow(3).unwrap();
        assert!(!g.is_dag());
        assert!(validate_game(&g).is_empty());
        let v0 = g.vertex("v_0").unwrap();
        assert!(g.successors(v0).contains(&g.sink()));
        let v2 = g.vertex("v_2").unwrap();
        assert!(g.successors(v2).contains(&g.target()));
    }

    #[test]
    fn choice_prefixes_children() {
        let g = gen_choice(&[gen_race(4, 5).unwrap(), gen_race(3, 5).unwrap()]).unwrap();
        let root = g.vertex("root").unwrap();
        let names: Vec<_> = g.successors(root).iter().map(|&u| g.name(u)).collect();
        assert_eq!(names, ["c0/v_{4,5}", "c1/v_{3,5}"]);
        assert!(g.vertex("c0/v_{4,5}").is_some());
        assert_eq!(g.vertex_count(), 3 + 20 + 15);
    }

    #[test]
    fn topological_order_puts_successors_first() {
        let g = gen_race(3, 3).unwrap();
        let order = topological_order(&g).unwrap();
        assert_eq!(&order[..2], &[g.target(), g.sink()]);
        let mut pos = vec![0; g.vertex_count()];
        for (i, v) in order.iter().enumerate() {
            pos[v.0] = i;
        }
        for (a, b) in g.edges() {
            assert!(pos[b.0] < pos[a.0]);
        }
        assert!(matches!(
            topological_order(&gen_tow(2).unwrap()),
            Err(Error::NotDag)
        ));
    }

    #[test]
    fn simple_paths_in_cyclic_game() {
        let g = gen_pipe_violation();
        assert_eq!(longest_simple_paths(&g), [0, 4, 4, 3, 4, 0]);
        let r = gen_race(3, 2).unwrap();
        assert_eq!(longest_simple_paths(&r), max_paths(&r).unwrap());
    }

    #[test]
    fn validation_reports_each_rule() {
        let names = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
        let g = Game::from_parts(names(4), &[(0, 2), (2, 1), (3, 3)], 0, 1).unwrap();
        let rules: Vec<_> = validate_game(&g)
            .into_iter()
            .map(|v| (v.vertex.0, v.rule))
            .collect();
        assert!(rules.contains(&(0, Rule::TargetHasSuccessors)));
        assert!(rules.contains(&(3, Rule::NoPathToTarget)));
        assert!(rules.contains(&(3, Rule::NoPathToSink)));
        let g = Game::from_parts(names(3), &[(2, 1)], 0, 1).unwrap();
        let rules: Vec<_> = validate_game(&g).into_iter().map(|v| v.rule).collect();
        assert_eq!(rules, [Rule::NoPathToTarget]);
        let g = Game::from_parts(names(3), &[], 0, 1).unwrap();
        let rules: Vec<_> = validate_game(&g).into_iter().map(|v| v.rule).collect();
        assert_eq!(rules, [Rule::NoSuccessors]);
        assert!(Game::new(names(2), &[], 1, 1).is_err());
        assert!(Game::from_parts(names(2), &[(0, 5)], 0, 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = gen_pipe_violation();
        let back = Game::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
        let bad = r#"{"vertices":["a","b","c"],"edges":[[2,1]],"target":0,"sink":1}"#;
        assert!(matches!(Game::from_json(bad), Err(Error::InvalidGame(_))));
    }
}
