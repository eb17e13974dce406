//! Parameter layout and per-record forward / backward passes.
//!
//! All parameters live in one flat vector. Dense weights are stored
//! input-major (`w[k * n_out + o]`) so that a sparse context input adds a
//! contiguous row per selected column.

use serde::{Deserialize, Serialize};

/// Which network the parameters describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Architecture {
    /// GMF path (`u ⊙ i`) and MLP path (`[u, i, masked context]`) fused
    /// before the sigmoid output.
    TwoTower,
    /// Masked context → MLP → sigmoid, no user or item input.
    ContextOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dense {
    pub w: usize,
    pub b: Option<usize>,
    pub n_in: usize,
    pub n_out: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Embeddings {
    pub user_gmf: usize,
    pub item_gmf: usize,
    pub user_mlp: usize,
    pub item_mlp: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Layout {
    pub arch: Architecture,
    pub emb: Option<Embeddings>,
    pub hidden: Vec<Dense>,
    pub output: Dense,
    /// Width of the embedding prefix of the first hidden layer's input.
    pub emb_inputs: usize,
    pub total: usize,
}

/// Named parameter block, used for reporting and checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub name: String,
    pub range: std::ops::Range<usize>,
}

impl Layout {
    pub fn new(
        arch: Architecture,
        n_users: usize,
        n_items: usize,
        n_features: usize,
        embedding_dim: usize,
        hidden: &[usize],
        use_bias: bool,
    ) -> Self {
        let mut next = 0;
        let mut take = |n: usize| {
            let at = next;
            next += n;
            at
        };
        let emb = match arch {
            Architecture::TwoTower => Some(Embeddings {
                user_gmf: take(n_users * embedding_dim),
                item_gmf: take(n_items * embedding_dim),
                user_mlp: take(n_users * embedding_dim),
                item_mlp: take(n_items * embedding_dim),
                dim: embedding_dim,
            }),
            Architecture::ContextOnly => None,
        };
        let emb_inputs = if emb.is_some() { 2 * embedding_dim } else { 0 };
        let mut n_in = emb_inputs + n_features;
        let mut layers = Vec::with_capacity(hidden.len());
        for &n_out in hidden {
            let w = take(n_in * n_out);
            let b = use_bias.then(|| take(n_out));
            layers.push(Dense { w, b, n_in, n_out });
            n_in = n_out;
        }
        let fused = n_in + if emb.is_some() { embedding_dim } else { 0 };
        let w = take(fused);
        let b = use_bias.then(|| take(1));
        let output = Dense { w, b, n_in: fused, n_out: 1 };
        Layout { arch, emb, hidden: layers, output, emb_inputs, total: next }
    }

    pub fn has_bias(&self) -> bool {
        self.output.b.is_some()
    }

    pub fn blocks(&self) -> Vec<Block> {
        let mut out = Vec::new();
        if let Some(e) = self.emb {
            let users = (e.item_gmf - e.user_gmf) / e.dim;
            let items = (e.user_mlp - e.item_gmf) / e.dim;
            for (name, at, rows) in [
                ("embedding.user_gmf", e.user_gmf, users),
                ("embedding.item_gmf", e.item_gmf, items),
                ("embedding.user_mlp", e.user_mlp, users),
                ("embedding.item_mlp", e.item_mlp, items),
            ] {
                out.push(Block { name: name.into(), range: at..at + rows * e.dim });
            }
        }
        let mut dense = |name: String, d: &Dense| {
            out.push(Block { name: format!("{name}.weight"), range: d.w..d.w + d.n_in * d.n_out });
            if let Some(b) = d.b {
                out.push(Block { name: format!("{name}.bias"), range: b..b + d.n_out });
            }
        };
        for (l, d) in self.hidden.iter().enumerate() {
            dense(format!("dense.{l}"), d);
        }
        let out_name = match self.arch {
            Architecture::TwoTower => "fusion",
            Architecture::ContextOnly => "output",
        };
        dense(out_name.into(), &self.output);
        out
    }
}

/// Scratch buffers for one record.
#[derive(Debug, Clone)]
pub(crate) struct Workspace {
    /// Embedding prefix of the first layer input: `[u_mlp, i_mlp]`.
    emb_in: Vec<f64>,
    gmf: Vec<f64>,
    /// Post-activation output of each hidden layer.
    post: Vec<Vec<f64>>,
    /// Fused vector after dropout, the output layer input.
    fused: Vec<f64>,
    /// Dropout multipliers (0 or 1/(1-p)) per fused entry.
    drop: Vec<f64>,
    d_post: Vec<Vec<f64>>,
    d_fused: Vec<f64>,
}

impl Workspace {
    pub fn new(layout: &Layout) -> Self {
        let e = layout.emb.map_or(0, |e| e.dim);
        let post: Vec<Vec<f64>> = layout.hidden.iter().map(|d| vec![0.0; d.n_out]).collect();
        Workspace {
            emb_in: vec![0.0; layout.emb_inputs],
            gmf: vec![0.0; e],
            d_post: post.clone(),
            post,
            fused: vec![0.0; layout.output.n_in],
            drop: vec![1.0; layout.output.n_in],
            d_fused: vec![0.0; layout.output.n_in],
        }
    }

    /// Sets dropout multipliers for the next forward pass; `None` disables.
    pub fn set_dropout(&mut self, keep: Option<&mut dyn FnMut() -> bool>, rate: f64) {
        match keep {
            None => self.drop.iter_mut().for_each(|m| *m = 1.0),
            Some(keep) => {
                let scale = 1.0 / (1.0 - rate);
                for m in &mut self.drop {
                    *m = if keep() { scale } else { 0.0 };
                }
            }
        }
    }
}

/// One record's inputs. `active` lists the selected context columns.
#[derive(Clone, Copy)]
pub(crate) struct Input<'a> {
    pub user: usize,
    pub item: usize,
    pub context: &'a [f64],
    pub active: &'a [usize],
}

#[inline]
fn dense_forward(p: &[f64], d: &Dense, input: &[f64], out: &mut [f64]) {
    match d.b {
        Some(b) => out.copy_from_slice(&p[b..b + d.n_out]),
        None => out.iter_mut().for_each(|o| *o = 0.0),
    }
    for (k, &x) in input.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        let row = &p[d.w + k * d.n_out..d.w + (k + 1) * d.n_out];
        for (o, &w) in out.iter_mut().zip(row) {
            *o += x * w;
        }
    }
}

/// Forward pass; returns the output logit.
pub(crate) fn forward(p: &[f64], layout: &Layout, x: Input<'_>, ws: &mut Workspace) -> f64 {
    let first = &layout.hidden[0];
    if let Some(e) = layout.emb {
        let d = e.dim;
        let ug = &p[e.user_gmf + x.user * d..][..d];
        let ig = &p[e.item_gmf + x.item * d..][..d];
        for k in 0..d {
            ws.gmf[k] = ug[k] * ig[k];
        }
        ws.emb_in[..d].copy_from_slice(&p[e.user_mlp + x.user * d..][..d]);
        ws.emb_in[d..].copy_from_slice(&p[e.item_mlp + x.item * d..][..d]);
    }

    // first hidden layer: dense embedding prefix + sparse context
    {
        let out = &mut ws.post[0];
        match first.b {
            Some(b) => out.copy_from_slice(&p[b..b + first.n_out]),
            None => out.iter_mut().for_each(|o| *o = 0.0),
        }
        let n = first.n_out;
        for (k, &v) in ws.emb_in.iter().enumerate() {
            let row = &p[first.w + k * n..][..n];
            for (o, &w) in out.iter_mut().zip(row) {
                *o += v * w;
            }
        }
        for &j in x.active {
            let v = x.context[j];
            if v == 0.0 {
                continue;
            }
            let k = layout.emb_inputs + j;
            let row = &p[first.w + k * n..][..n];
            for (o, &w) in out.iter_mut().zip(row) {
                *o += v * w;
            }
        }
        out.iter_mut().for_each(|o| *o = o.max(0.0));
    }
    for l in 1..layout.hidden.len() {
        let (prev, rest) = ws.post.split_at_mut(l);
        dense_forward(p, &layout.hidden[l], &prev[l - 1], &mut rest[0]);
        rest[0].iter_mut().for_each(|o| *o = o.max(0.0));
    }

    let mlp_out = ws.post.last().expect("at least one hidden layer");
    let g = ws.gmf.len();
    ws.fused[..g].copy_from_slice(&ws.gmf);
    ws.fused[g..].copy_from_slice(mlp_out);
    for (f, &m) in ws.fused.iter_mut().zip(&ws.drop) {
        *f *= m;
    }
    let o = &layout.output;
    let mut z = o.b.map_or(0.0, |b| p[b]);
    for (k, &f) in ws.fused.iter().enumerate() {
        z += f * p[o.w + k];
    }
    z
}

/// Backward pass for the record last passed to [`forward`]; adds
/// `d_logit * dz/dθ` into `grad`.
pub(crate) fn backward(p: &[f64], layout: &Layout, x: Input<'_>, ws: &mut Workspace, d_logit: f64, grad: &mut [f64]) {
    let o = &layout.output;
    if let Some(b) = o.b {
        grad[b] += d_logit;
    }
    for k in 0..o.n_in {
        grad[o.w + k] += ws.fused[k] * d_logit;
        ws.d_fused[k] = p[o.w + k] * d_logit * ws.drop[k];
    }

    let g = ws.gmf.len();
    if let Some(e) = layout.emb {
        let d = e.dim;
        let ug = e.user_gmf + x.user * d;
        let ig = e.item_gmf + x.item * d;
        for k in 0..d {
            let dg = ws.d_fused[k];
            grad[ug + k] += dg * p[ig + k];
            grad[ig + k] += dg * p[ug + k];
        }
    }

    let n_layers = layout.hidden.len();
    {
        let last = &mut ws.d_post[n_layers - 1];
        last.copy_from_slice(&ws.d_fused[g..]);
    }
    for l in (0..n_layers).rev() {
        let d = &layout.hidden[l];
        // through ReLU
        for (dp, &a) in ws.d_post[l].iter_mut().zip(&ws.post[l]) {
            if a <= 0.0 {
                *dp = 0.0;
            }
        }
        let delta = &ws.d_post[l];
        if let Some(b) = d.b {
            for (gb, &dv) in grad[b..b + d.n_out].iter_mut().zip(delta) {
                *gb += dv;
            }
        }
        if l > 0 {
            let (lower, upper) = ws.d_post.split_at_mut(l);
            let delta = &upper[0];
            let input = &ws.post[l - 1];
            let d_in = &mut lower[l - 1];
            for k in 0..d.n_in {
                let row = d.w + k * d.n_out;
                let xk = input[k];
                let mut acc = 0.0;
                for (oi, &dv) in delta.iter().enumerate() {
                    grad[row + oi] += xk * dv;
                    acc += p[row + oi] * dv;
                }
                d_in[k] = acc;
            }
        } else {
            let n = d.n_out;
            // embedding prefix: weights and input gradient
            if let Some(e) = layout.emb {
                let dim = e.dim;
                for k in 0..layout.emb_inputs {
                    let row = d.w + k * n;
                    let xk = ws.emb_in[k];
                    let mut acc = 0.0;
                    for (oi, &dv) in delta.iter().enumerate() {
                        grad[row + oi] += xk * dv;
                        acc += p[row + oi] * dv;
                    }
                    let target =
                        if k < dim { e.user_mlp + x.user * dim + k } else { e.item_mlp + x.item * dim + (k - dim) };
                    grad[target] += acc;
                }
            }
            for &j in x.active {
                let v = x.context[j];
                if v == 0.0 {
                    continue;
                }
                let row = d.w + (layout.emb_inputs + j) * n;
                for (oi, &dv) in delta.iter().enumerate() {
                    grad[row + oi] += v * dv;
                }
            }
        }
    }
}

#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Binary cross-entropy of logit `z` against label `y`, computed stably.
#[inline]
pub fn bce_with_logit(z: f64, y: f64) -> f64 {
    z.max(0.0) - z * y + (-z.abs()).exp().ln_1p()
}
