//! The acyclic linear network with globally ordered edges.
//!
//! Edges `e(1)..e(k)` fire in index order; each edge's symbol is a linear
//! combination of the tail node's in-edge symbols (and of the source's input
//! coordinates when the tail is the source). An adversary placement marks a
//! wiretap set `E_E` and an injection set `E_A` as strictly increasing edge
//! index lists. Deriving the transfer matrices gives the wiretap-and-addition
//! model
//!
//! ```text
//! Y_B = K_B X + H_B Z,    Y_E = K_E X + H_E Z
//! ```
//!
//! where the injected coordinate `i` adds to edge `eta(i)`'s symbol after the
//! coding row is applied, and a wiretap on edge `zeta(j)` taps the symbol
//! before any same-edge injection. Downstream edges read post-injection
//! values, so `H_E[j][i] = 0` whenever `eta(i) >= zeta(j)` holds by
//! construction.
//!
//! # Network description files
//!
//! Line oriented; `#` starts a comment. Node and edge indices in files are
//! 1-based (matching the `e(1)..e(k)` convention); the API is 0-based.
//!
//! ```text
//! field GF(2)
//! node alice source
//! node v1
//! node bob sink
//! edge 1 alice v1
//! coef 1 x1=1
//! edge 2 v1 bob
//! coef 2 e1=1
//! sink-read 2
//! wiretap 1
//! inject 2
//! attack-nodes v1
//! ```
//!
//! `wiretap`/`inject` lines union with the edges derived from
//! `attack-nodes`, so a node adversary's default conversion (in-edges
//! wiretapped, out-edges injectable) can be widened, e.g. to let an occupied
//! node also falsify its in-edges.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::field::{FieldError, FieldSpec};
use crate::linalg::FqMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("duplicate node name `{0}`")]
    DuplicateNode(String),
    #[error("unknown node name `{0}`")]
    UnknownNode(String),
    #[error("network needs exactly one source and one sink")]
    MissingEndpoints,
    #[error("edge {edge} (1-based) reads edge {reads}, which does not precede it")]
    OrderViolation { edge: usize, reads: usize },
    #[error("edge {edge} references e{reads}, which is not an in-edge of its tail")]
    NotAnInEdge { edge: usize, reads: usize },
    #[error("edge {edge} uses source coordinate x{coord} but its tail is not the source")]
    SourceCoefOffSource { edge: usize, coord: usize },
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("attacking the source or sink is not allowed: `{0}`")]
    AttackedEndpoint(String),
    #[error("file parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Where an edge's coding coefficient reads from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputRef {
    /// Source coordinate `x<i>` (0-based), valid only on edges out of the source.
    Source(usize),
    /// In-edge `e<j>` (0-based) of the tail node.
    Edge(usize),
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    /// Coding row: coefficient codes applied to the referenced inputs.
    pub coefs: Vec<(InputRef, u64)>,
}

#[derive(Debug, Clone)]
pub struct LinearNetwork {
    spec: FieldSpec,
    node_names: Vec<String>,
    source: usize,
    sink: usize,
    edges: Vec<Edge>,
    /// Edge indices Bob reads, in order (duplicates allowed).
    sink_reads: Vec<usize>,
    /// Number of source coordinates m3.
    input_dim: usize,
}

/// Wiretap set `E_E` (zeta) and injection set `E_A` (eta) as strictly
/// increasing 0-based edge index lists. `|E_A| = m5`, `|E_E| = m6`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdversaryPlacement {
    wiretap: Vec<usize>,
    inject: Vec<usize>,
}

impl AdversaryPlacement {
    /// Sorts and deduplicates; indices are validated against a network by
    /// [`LinearNetwork::derive_transfer`].
    pub fn new(mut wiretap: Vec<usize>, mut inject: Vec<usize>) -> AdversaryPlacement {
        wiretap.sort_unstable();
        wiretap.dedup();
        inject.sort_unstable();
        inject.dedup();
        AdversaryPlacement { wiretap, inject }
    }

    pub fn empty() -> AdversaryPlacement {
        AdversaryPlacement::default()
    }

    /// zeta: wiretapped edge indices, strictly increasing.
    pub fn wiretap(&self) -> &[usize] {
        &self.wiretap
    }

    /// eta: injection edge indices, strictly increasing.
    pub fn inject(&self) -> &[usize] {
        &self.inject
    }

    pub fn union(&self, other: &AdversaryPlacement) -> AdversaryPlacement {
        let mut w = self.wiretap.clone();
        w.extend_from_slice(&other.wiretap);
        let mut a = self.inject.clone();
        a.extend_from_slice(&other.inject);
        AdversaryPlacement::new(w, a)
    }

    pub fn is_empty(&self) -> bool {
        self.wiretap.is_empty() && self.inject.is_empty()
    }
}

/// The four linear maps of the wiretap-and-addition model.
#[derive(Debug, Clone)]
pub struct TransferMatrices {
    /// m4 x m3: source input to sink output.
    pub k_b: FqMatrix,
    /// m6 x m3: source input to wiretapped symbols.
    pub k_e: FqMatrix,
    /// m4 x m5: injected error to sink output.
    pub h_b: FqMatrix,
    /// m6 x m5: injected error to wiretapped symbols.
    pub h_e: FqMatrix,
}

impl TransferMatrices {
    pub fn spec(&self) -> &FieldSpec {
        self.k_b.spec()
    }

    pub fn m3(&self) -> usize {
        self.k_b.cols()
    }

    pub fn m4(&self) -> usize {
        self.k_b.rows()
    }

    pub fn m5(&self) -> usize {
        self.h_b.cols()
    }

    pub fn m6(&self) -> usize {
        self.k_e.rows()
    }

    /// Checks the causality invariant `H_E[j][i] = 0` for `eta(i) >= zeta(j)`.
    pub fn causality_holds(&self, adv: &AdversaryPlacement) -> bool {
        for (j, &zeta) in adv.wiretap().iter().enumerate() {
            for (i, &eta) in adv.inject().iter().enumerate() {
                if eta >= zeta && self.h_e.get(j, i) != 0 {
                    return false;
                }
            }
        }
        true
    }
}

/// Channel parameters of Table-I form: ranks m0..m2 and dimensions m3..m6.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelParams {
    /// rank K_B: rank of the channel from Alice to Bob.
    pub m0: usize,
    /// rank H_B: rank of Eve's injected information as seen by Bob.
    pub m1: usize,
    /// rank K_E: rank of Eve's wiretapped information.
    pub m2: usize,
    /// Dimension of Alice's input.
    pub m3: usize,
    /// Dimension of Bob's observation.
    pub m4: usize,
    /// Dimension of Eve's injection (|E_A|).
    pub m5: usize,
    /// Dimension of Eve's observation (|E_E|).
    pub m6: usize,
}

/// Ranks computed from derived transfer matrices.
pub fn channel_params(tm: &TransferMatrices) -> ChannelParams {
    ChannelParams {
        m0: tm.k_b.rank(),
        m1: tm.h_b.rank(),
        m2: tm.k_e.rank(),
        m3: tm.m3(),
        m4: tm.m4(),
        m5: tm.m5(),
        m6: tm.m6(),
    }
}

impl fmt::Display for ChannelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m0={} m1={} m2={} m3={} m4={} m5={} m6={}",
            self.m0, self.m1, self.m2, self.m3, self.m4, self.m5, self.m6
        )
    }
}

/// Incremental construction of a [`LinearNetwork`].
pub struct NetworkBuilder {
    spec: FieldSpec,
    names: Vec<String>,
    source: Option<usize>,
    sink: Option<usize>,
    edges: Vec<Edge>,
    sink_reads: Vec<usize>,
    input_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Source,
    Sink,
    Relay,
}

impl NetworkBuilder {
    pub fn new(spec: &FieldSpec) -> NetworkBuilder {
        NetworkBuilder {
            spec: spec.clone(),
            names: Vec::new(),
            source: None,
            sink: None,
            edges: Vec::new(),
            sink_reads: Vec::new(),
            input_dim: 0,
        }
    }

    pub fn node(&mut self, name: &str, role: Role) -> Result<usize, NetError> {
        if self.names.iter().any(|n| n == name) {
            return Err(NetError::DuplicateNode(name.to_string()));
        }
        let idx = self.names.len();
        self.names.push(name.to_string());
        match role {
            Role::Source => self.source = Some(idx),
            Role::Sink => self.sink = Some(idx),
            Role::Relay => {}
        }
        Ok(idx)
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Appends an edge; returns its 0-based index.
    pub fn edge(
        &mut self,
        tail: usize,
        head: usize,
        coefs: &[(InputRef, u64)],
    ) -> Result<usize, NetError> {
        let idx = self.edges.len();
        for &(r, _) in coefs {
            if let InputRef::Source(i) = r {
                self.input_dim = self.input_dim.max(i + 1);
            }
        }
        self.edges.push(Edge {
            tail,
            head,
            coefs: coefs.to_vec(),
        });
        Ok(idx)
    }

    pub fn sink_read(&mut self, edge: usize) {
        self.sink_reads.push(edge);
    }

    /// Declares at least `m3` source coordinates (otherwise inferred from the
    /// largest `x<i>` referenced).
    pub fn input_dim(&mut self, m3: usize) {
        self.input_dim = self.input_dim.max(m3);
    }

    pub fn build(self) -> Result<LinearNetwork, NetError> {
        let (Some(source), Some(sink)) = (self.source, self.sink) else {
            return Err(NetError::MissingEndpoints);
        };
        let net = LinearNetwork {
            spec: self.spec,
            node_names: self.names,
            source,
            sink,
            edges: self.edges,
            sink_reads: self.sink_reads,
            input_dim: self.input_dim,
        };
        net.validate()?;
        Ok(net)
    }
}

impl LinearNetwork {
    fn validate(&self) -> Result<(), NetError> {
        for (idx, edge) in self.edges.iter().enumerate() {
            // the edge order must be topological: every in-edge of the tail
            // precedes this edge (this also rules out directed cycles)
            for (j, other) in self.edges.iter().enumerate() {
                if other.head == edge.tail && j >= idx {
                    return Err(NetError::OrderViolation {
                        edge: idx + 1,
                        reads: j + 1,
                    });
                }
            }
            for &(r, _) in &edge.coefs {
                match r {
                    InputRef::Source(i) => {
                        if edge.tail != self.source {
                            return Err(NetError::SourceCoefOffSource {
                                edge: idx + 1,
                                coord: i + 1,
                            });
                        }
                    }
                    InputRef::Edge(j) => {
                        if j >= idx {
                            return Err(NetError::OrderViolation {
                                edge: idx + 1,
                                reads: j + 1,
                            });
                        }
                        if self.edges[j].head != edge.tail {
                            return Err(NetError::NotAnInEdge {
                                edge: idx + 1,
                                reads: j + 1,
                            });
                        }
                    }
                }
            }
        }
        for &r in &self.sink_reads {
            if r >= self.edges.len() {
                return Err(NetError::EdgeOutOfRange(r + 1));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_names(&self) -> &[String] {
        &self.node_names
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.node_names.iter().position(|n| n == name)
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn sink_reads(&self) -> &[usize] {
        &self.sink_reads
    }

    /// Intermediate node names (everything but source and sink).
    pub fn intermediate_nodes(&self) -> Vec<usize> {
        (0..self.node_names.len())
            .filter(|&i| i != self.source && i != self.sink)
            .collect()
    }

    /// Converts a node adversary into an edge adversary: every edge incident
    /// to an occupied node is wiretapped; every out-edge is injectable. An
    /// occupied node reads everything incident but only falsifies what it
    /// transmits; widen with explicit `inject` lines if the occupied node
    /// should also rewrite its in-edges.
    pub fn node_to_edge(&self, attacked: &[usize]) -> Result<AdversaryPlacement, NetError> {
        let mut wiretap = BTreeSet::new();
        let mut inject = BTreeSet::new();
        for &node in attacked {
            if node == self.source || node == self.sink {
                return Err(NetError::AttackedEndpoint(
                    self.node_names
                        .get(node)
                        .cloned()
                        .unwrap_or_else(|| format!("#{node}")),
                ));
            }
            if node >= self.node_names.len() {
                return Err(NetError::UnknownNode(format!("#{node}")));
            }
            for (idx, edge) in self.edges.iter().enumerate() {
                if edge.head == node {
                    wiretap.insert(idx);
                }
                if edge.tail == node {
                    wiretap.insert(idx);
                    inject.insert(idx);
                }
            }
        }
        Ok(AdversaryPlacement {
            wiretap: wiretap.into_iter().collect(),
            inject: inject.into_iter().collect(),
        })
    }

    /// Same, by node names.
    pub fn node_to_edge_named(&self, names: &[String]) -> Result<AdversaryPlacement, NetError> {
        let mut idx = Vec::with_capacity(names.len());
        for n in names {
            idx.push(
                self.node_index(n)
                    .ok_or_else(|| NetError::UnknownNode(n.clone()))?,
            );
        }
        self.node_to_edge(&idx)
    }

    /// Derives the transfer matrices by forward propagation in edge order.
    pub fn derive_transfer(
        &self,
        adv: &AdversaryPlacement,
    ) -> Result<TransferMatrices, NetError> {
        for &e in adv.wiretap().iter().chain(adv.inject().iter()) {
            if e >= self.edges.len() {
                return Err(NetError::EdgeOutOfRange(e + 1));
            }
        }
        let m3 = self.input_dim;
        let m5 = adv.inject().len();
        let width = m3 + m5;
        let spec = &self.spec;
        // per-edge symbolic rows over [X | Z]
        let mut pre = vec![vec![0u64; width]; self.edges.len()];
        let mut post = vec![vec![0u64; width]; self.edges.len()];
        for (idx, edge) in self.edges.iter().enumerate() {
            let mut row = vec![0u64; width];
            for &(r, c) in &edge.coefs {
                match r {
                    InputRef::Source(i) => {
                        row[i] = spec.add(row[i], c);
                    }
                    InputRef::Edge(j) => {
                        for (acc, &src) in row.iter_mut().zip(post[j].iter()) {
                            *acc = spec.add(*acc, spec.mul(c, src));
                        }
                    }
                }
            }
            pre[idx] = row.clone();
            if let Some(i) = adv.inject().iter().position(|&e| e == idx) {
                row[m3 + i] = spec.add(row[m3 + i], 1);
            }
            post[idx] = row;
        }
        let m4 = self.sink_reads.len();
        let m6 = adv.wiretap().len();
        let k_b = FqMatrix::from_fn(spec, m4, m3, |i, j| post[self.sink_reads[i]][j]);
        let h_b = FqMatrix::from_fn(spec, m4, m5, |i, j| post[self.sink_reads[i]][m3 + j]);
        let k_e = FqMatrix::from_fn(spec, m6, m3, |i, j| pre[adv.wiretap()[i]][j]);
        let h_e = FqMatrix::from_fn(spec, m6, m5, |i, j| pre[adv.wiretap()[i]][m3 + j]);
        let tm = TransferMatrices { k_b, k_e, h_b, h_e };
        debug_assert!(tm.causality_holds(adv));
        Ok(tm)
    }

    /// Direct edge-by-edge evaluation for one use of the network: returns
    /// `(y_b, y_e)` for the given input and injection vectors. Reference
    /// oracle for [`LinearNetwork::derive_transfer`].
    pub fn evaluate(
        &self,
        adv: &AdversaryPlacement,
        x: &[u64],
        z: &[u64],
    ) -> Result<(Vec<u64>, Vec<u64>), NetError> {
        assert_eq!(x.len(), self.input_dim);
        assert_eq!(z.len(), adv.inject().len());
        let spec = &self.spec;
        let mut pre_vals = vec![0u64; self.edges.len()];
        let mut post_vals = vec![0u64; self.edges.len()];
        for (idx, edge) in self.edges.iter().enumerate() {
            let mut v = 0u64;
            for &(r, c) in &edge.coefs {
                let s = match r {
                    InputRef::Source(i) => x[i],
                    InputRef::Edge(j) => post_vals[j],
                };
                v = spec.add(v, spec.mul(c, s));
            }
            pre_vals[idx] = v;
            if let Some(i) = adv.inject().iter().position(|&e| e == idx) {
                v = spec.add(v, z[i]);
            }
            post_vals[idx] = v;
        }
        let y_b = self.sink_reads.iter().map(|&e| post_vals[e]).collect();
        let y_e = adv.wiretap().iter().map(|&e| pre_vals[e]).collect();
        Ok((y_b, y_e))
    }

    /// Parses the network description format. Returns the network plus any
    /// adversary placement assembled from `wiretap`/`inject`/`attack-nodes`
    /// lines (explicit edge lines union with the node conversion).
    pub fn parse(text: &str) -> Result<(LinearNetwork, AdversaryPlacement), NetError> {
        let mut spec: Option<FieldSpec> = None;
        let mut builder: Option<NetworkBuilder> = None;
        let mut pending: Vec<(usize, String)> = Vec::new(); // non-node lines
        // first pass: field and nodes (so edges can reference any node)
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut toks = line.split_whitespace();
            let kw = toks.next().unwrap();
            match kw {
                "field" => {
                    let lit: String = toks.collect::<Vec<_>>().join(" ");
                    let s = FieldSpec::parse(&lit)?;
                    builder = Some(NetworkBuilder::new(&s));
                    spec = Some(s);
                }
                "node" => {
                    let b = builder.as_mut().ok_or(NetError::Parse {
                        line: ln + 1,
                        msg: "node before field".into(),
                    })?;
                    let name = toks.next().ok_or(NetError::Parse {
                        line: ln + 1,
                        msg: "node needs a name".into(),
                    })?;
                    let role = match toks.next() {
                        Some("source") => Role::Source,
                        Some("sink") => Role::Sink,
                        None => Role::Relay,
                        Some(other) => {
                            return Err(NetError::Parse {
                                line: ln + 1,
                                msg: format!("unknown node role `{other}`"),
                            })
                        }
                    };
                    b.node(name, role)?;
                }
                _ => pending.push((ln + 1, line.to_string())),
            }
        }
        let mut builder = builder.ok_or(NetError::Parse {
            line: 0,
            msg: "missing `field` line".into(),
        })?;
        let spec = spec.unwrap();
        let mut edge_tails: Vec<usize> = Vec::new();
        let mut coef_lines: Vec<(usize, usize, Vec<(InputRef, u64)>)> = Vec::new();
        let mut sink_reads = Vec::new();
        let mut wiretap = Vec::new();
        let mut inject = Vec::new();
        let mut attack_nodes: Vec<String> = Vec::new();
        let parse_idx = |tok: &str, ln: usize| -> Result<usize, NetError> {
            tok.parse::<usize>()
                .ok()
                .filter(|&v| v >= 1)
                .map(|v| v - 1)
                .ok_or(NetError::Parse {
                    line: ln,
                    msg: format!("bad index `{tok}`"),
                })
        };
        for (ln, line) in &pending {
            let mut toks = line.split_whitespace();
            let kw = toks.next().unwrap();
            match kw {
                "edge" => {
                    let idx = parse_idx(toks.next().unwrap_or(""), *ln)?;
                    if idx != edge_tails.len() {
                        return Err(NetError::Parse {
                            line: *ln,
                            msg: format!("edge indices must be 1,2,...; got {}", idx + 1),
                        });
                    }
                    let tail_name = toks.next().ok_or(NetError::Parse {
                        line: *ln,
                        msg: "edge needs tail and head".into(),
                    })?;
                    let head_name = toks.next().ok_or(NetError::Parse {
                        line: *ln,
                        msg: "edge needs tail and head".into(),
                    })?;
                    let tail = builder
                        .node_index(tail_name)
                        .ok_or_else(|| NetError::UnknownNode(tail_name.to_string()))?;
                    let head = builder
                        .node_index(head_name)
                        .ok_or_else(|| NetError::UnknownNode(head_name.to_string()))?;
                    edge_tails.push(tail);
                    builder.edge(tail, head, &[])?;
                }
                "coef" => {
                    let idx = parse_idx(toks.next().unwrap_or(""), *ln)?;
                    let mut coefs = Vec::new();
                    for assign in toks {
                        let (refpart, val) = assign.split_once('=').ok_or(NetError::Parse {
                            line: *ln,
                            msg: format!("bad coefficient `{assign}`"),
                        })?;
                        let code = val.parse::<u64>().map_err(|_| NetError::Parse {
                            line: *ln,
                            msg: format!("bad field literal `{val}`"),
                        })?;
                        if code >= spec.order() {
                            return Err(FieldError::CodeOutOfRange {
                                code,
                                order: spec.order(),
                            }
                            .into());
                        }
                        let r = if let Some(xi) = refpart.strip_prefix('x') {
                            InputRef::Source(parse_idx(xi, *ln)?)
                        } else if let Some(ej) = refpart.strip_prefix('e') {
                            InputRef::Edge(parse_idx(ej, *ln)?)
                        } else {
                            return Err(NetError::Parse {
                                line: *ln,
                                msg: format!("bad input ref `{refpart}`"),
                            });
                        };
                        coefs.push((r, code));
                    }
                    coef_lines.push((*ln, idx, coefs));
                }
                "sink-read" => {
                    for tok in toks {
                        sink_reads.push(parse_idx(tok, *ln)?);
                    }
                }
                "wiretap" => {
                    for tok in toks {
                        wiretap.push(parse_idx(tok, *ln)?);
                    }
                }
                "inject" => {
                    for tok in toks {
                        inject.push(parse_idx(tok, *ln)?);
                    }
                }
                "attack-nodes" => {
                    attack_nodes.extend(toks.map(|s| s.to_string()));
                }
                other => {
                    return Err(NetError::Parse {
                        line: *ln,
                        msg: format!("unknown keyword `{other}`"),
                    })
                }
            }
        }
        // attach coefficients
        let mut edges_coefs: Vec<Vec<(InputRef, u64)>> = vec![Vec::new(); edge_tails.len()];
        for (ln, idx, coefs) in coef_lines {
            if idx >= edge_tails.len() {
                return Err(NetError::Parse {
                    line: ln,
                    msg: format!("coef for unknown edge {}", idx + 1),
                });
            }
            edges_coefs[idx].extend(coefs);
        }
        for (idx, coefs) in edges_coefs.iter().enumerate() {
            builder.edges[idx].coefs = coefs.clone();
            for &(r, _) in coefs {
                if let InputRef::Source(i) = r {
                    builder.input_dim = builder.input_dim.max(i + 1);
                }
            }
        }
        for r in sink_reads {
            builder.sink_read(r);
        }
        let net = builder.build()?;
        let explicit = AdversaryPlacement::new(wiretap, inject);
        let from_nodes = if attack_nodes.is_empty() {
            AdversaryPlacement::empty()
        } else {
            net.node_to_edge_named(&attack_nodes)?
        };
        Ok((net, explicit.union(&from_nodes)))
    }
}
