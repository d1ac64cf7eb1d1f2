//! Pre-LayerNorm decoder-only transformer with hand-written backprop.
//!
//! All parameters live in one flat `f64` buffer; [`Layout`] maps tensor names
//! to ranges in it so optimizers and gradient checks can treat the model as a
//! single vector.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::config::ModelConfig;

const LN_EPS: f64 = 1e-5;
const INIT_STD: f64 = 0.02;

#[derive(Clone, Debug)]
pub(crate) struct LayerLayout {
    ln1_g: Range<usize>,
    ln1_b: Range<usize>,
    w_qkv: Range<usize>,
    b_qkv: Range<usize>,
    w_o: Range<usize>,
    b_o: Range<usize>,
    ln2_g: Range<usize>,
    ln2_b: Range<usize>,
    w_fc: Range<usize>,
    b_fc: Range<usize>,
    w_proj: Range<usize>,
    b_proj: Range<usize>,
}

/// Offsets of every tensor inside the flat parameter buffer.
#[derive(Clone, Debug)]
pub struct Layout {
    pub vocab: usize,
    pub dim: usize,
    pub hidden: usize,
    pub heads: usize,
    pub context: usize,
    tok_emb: Range<usize>,
    pos_emb: Range<usize>,
    layers: Vec<LayerLayout>,
    lnf_g: Range<usize>,
    lnf_b: Range<usize>,
    w_out: Range<usize>,
    b_out: Range<usize>,
    total: usize,
}

struct Cursor(usize);

impl Cursor {
    fn take(&mut self, n: usize) -> Range<usize> {
        let r = self.0..self.0 + n;
        self.0 += n;
        r
    }
}

impl Layout {
    pub fn new(config: &ModelConfig, vocab: usize) -> Self {
        let d = config.embedding_dim;
        let h = config.hidden_dim;
        let mut c = Cursor(0);
        let tok_emb = c.take(vocab * d);
        let pos_emb = c.take(config.context_len * d);
        let layers = (0..config.layer_count)
            .map(|_| LayerLayout {
                ln1_g: c.take(d),
                ln1_b: c.take(d),
                w_qkv: c.take(d * 3 * d),
                b_qkv: c.take(3 * d),
                w_o: c.take(d * d),
                b_o: c.take(d),
                ln2_g: c.take(d),
                ln2_b: c.take(d),
                w_fc: c.take(d * h),
                b_fc: c.take(h),
                w_proj: c.take(h * d),
                b_proj: c.take(d),
            })
            .collect();
        let lnf_g = c.take(d);
        let lnf_b = c.take(d);
        let w_out = c.take(d * vocab);
        let b_out = c.take(vocab);
        Layout {
            vocab,
            dim: d,
            hidden: h,
            heads: config.head_count,
            context: config.context_len,
            tok_emb,
            pos_emb,
            layers,
            lnf_g,
            lnf_b,
            w_out,
            b_out,
            total: c.0,
        }
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Initial parameters: N(0, 0.02) weights, residual projections scaled
    /// by `1/sqrt(2 * layers)`, unit LayerNorm gains, zero biases.
    pub fn init(&self, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, INIT_STD).expect("valid std");
        let mut p = vec![0.0; self.total];
        let mut fill = |r: &Range<usize>, scale: f64, rng: &mut ChaCha8Rng| {
            for x in &mut p[r.clone()] {
                *x = normal.sample(rng) * scale;
            }
        };
        let resid = 1.0 / libm::sqrt(2.0 * self.layers.len().max(1) as f64);
        fill(&self.tok_emb, 1.0, &mut rng);
        fill(&self.pos_emb, 1.0, &mut rng);
        for l in &self.layers {
            fill(&l.w_qkv, 1.0, &mut rng);
            fill(&l.w_o, resid, &mut rng);
            fill(&l.w_fc, 1.0, &mut rng);
            fill(&l.w_proj, resid, &mut rng);
        }
        fill(&self.w_out, 1.0, &mut rng);
        for l in &self.layers {
            p[l.ln1_g.clone()].fill(1.0);
            p[l.ln2_g.clone()].fill(1.0);
        }
        p[self.lnf_g.clone()].fill(1.0);
        p
    }
}

// --- dense kernels, row-major -------------------------------------------------

/// `out[r, c] += sum_i a[r, i] * w[i, c]`
fn matmul_add(out: &mut [f64], a: &[f64], w: &[f64], rows: usize, inner: usize, cols: usize) {
    for r in 0..rows {
        let out_row = &mut out[r * cols..(r + 1) * cols];
        for i in 0..inner {
            let av = a[r * inner + i];
            if av == 0.0 {
                continue;
            }
            let w_row = &w[i * cols..(i + 1) * cols];
            for (o, &wv) in out_row.iter_mut().zip(w_row) {
                *o += av * wv;
            }
        }
    }
}

/// `da[r, i] += sum_c dy[r, c] * w[i, c]`
fn matmul_bt_add(da: &mut [f64], dy: &[f64], w: &[f64], rows: usize, inner: usize, cols: usize) {
    for r in 0..rows {
        let dy_row = &dy[r * cols..(r + 1) * cols];
        for i in 0..inner {
            let w_row = &w[i * cols..(i + 1) * cols];
            da[r * inner + i] += dy_row.iter().zip(w_row).map(|(a, b)| a * b).sum::<f64>();
        }
    }
}

/// `dw[i, c] += sum_r a[r, i] * dy[r, c]`
fn matmul_at_add(dw: &mut [f64], a: &[f64], dy: &[f64], rows: usize, inner: usize, cols: usize) {
    for r in 0..rows {
        let dy_row = &dy[r * cols..(r + 1) * cols];
        for i in 0..inner {
            let av = a[r * inner + i];
            if av == 0.0 {
                continue;
            }
            let dw_row = &mut dw[i * cols..(i + 1) * cols];
            for (g, &d) in dw_row.iter_mut().zip(dy_row) {
                *g += av * d;
            }
        }
    }
}

fn add_bias(out: &mut [f64], b: &[f64]) {
    for row in out.chunks_mut(b.len()) {
        for (o, &bv) in row.iter_mut().zip(b) {
            *o += bv;
        }
    }
}

fn bias_grad(db: &mut [f64], dy: &[f64]) {
    for row in dy.chunks(db.len()) {
        for (g, &d) in db.iter_mut().zip(row) {
            *g += d;
        }
    }
}

struct LnCache {
    xhat: Vec<f64>,
    rstd: Vec<f64>,
    out: Vec<f64>,
}

fn layer_norm(x: &[f64], g: &[f64], b: &[f64]) -> LnCache {
    let d = g.len();
    let rows = x.len() / d;
    let mut xhat = vec![0.0; x.len()];
    let mut out = vec![0.0; x.len()];
    let mut rstd = vec![0.0; rows];
    for r in 0..rows {
        let row = &x[r * d..(r + 1) * d];
        let mean = row.iter().sum::<f64>() / d as f64;
        let var = row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / d as f64;
        let rs = 1.0 / libm::sqrt(var + LN_EPS);
        rstd[r] = rs;
        for i in 0..d {
            let xh = (row[i] - mean) * rs;
            xhat[r * d + i] = xh;
            out[r * d + i] = xh * g[i] + b[i];
        }
    }
    LnCache { xhat, rstd, out }
}

fn layer_norm_backward(
    cache: &LnCache,
    dy: &[f64],
    g: &[f64],
    dx: &mut [f64],
    dg: &mut [f64],
    db: &mut [f64],
) {
    let d = g.len();
    let rows = dy.len() / d;
    let mut dxhat = vec![0.0; d];
    for r in 0..rows {
        let dy_row = &dy[r * d..(r + 1) * d];
        let xh = &cache.xhat[r * d..(r + 1) * d];
        for i in 0..d {
            dg[i] += dy_row[i] * xh[i];
            db[i] += dy_row[i];
            dxhat[i] = dy_row[i] * g[i];
        }
        let mean_dxhat = dxhat.iter().sum::<f64>() / d as f64;
        let mean_dxhat_xhat = dxhat.iter().zip(xh).map(|(a, b)| a * b).sum::<f64>() / d as f64;
        let rs = cache.rstd[r];
        for i in 0..d {
            dx[r * d + i] += rs * (dxhat[i] - mean_dxhat - xh[i] * mean_dxhat_xhat);
        }
    }
}

const GELU_C: f64 = 0.797_884_560_802_865_4; // sqrt(2 / pi)

fn gelu(x: f64) -> f64 {
    0.5 * x * (1.0 + libm::tanh(GELU_C * (x + 0.044715 * x * x * x)))
}

fn gelu_grad(x: f64) -> f64 {
    let t = libm::tanh(GELU_C * (x + 0.044715 * x * x * x));
    0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * GELU_C * (1.0 + 3.0 * 0.044715 * x * x)
}

struct LayerCache {
    ln1: LnCache,
    qkv: Vec<f64>,
    probs: Vec<f64>,
    attn: Vec<f64>,
    ln2: LnCache,
    fc_pre: Vec<f64>,
    fc_act: Vec<f64>,
}

/// Activations kept from a forward pass for the backward pass.
pub struct Cache {
    ids: Vec<usize>,
    layers: Vec<LayerCache>,
    lnf: LnCache,
    pub logits: Vec<f64>,
}

impl Cache {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Forward pass over `ids` (at most `layout.context` tokens). Logits are
/// `ids.len() × vocab`, row `t` scoring the token after position `t`.
pub fn forward(layout: &Layout, p: &[f64], ids: &[usize]) -> Cache {
    let t_len = ids.len();
    assert!(t_len <= layout.context, "sequence longer than context");
    let d = layout.dim;
    let hd = layout.hidden;
    let heads = layout.heads;
    let dh = d / heads;
    let scale = 1.0 / libm::sqrt(dh as f64);

    let mut x = vec![0.0; t_len * d];
    for (t, &id) in ids.iter().enumerate() {
        let tok = &p[layout.tok_emb.start + id * d..layout.tok_emb.start + (id + 1) * d];
        let pos = &p[layout.pos_emb.start + t * d..layout.pos_emb.start + (t + 1) * d];
        for i in 0..d {
            x[t * d + i] = tok[i] + pos[i];
        }
    }

    let mut layers = Vec::with_capacity(layout.layers.len());
    for l in &layout.layers {
        let ln1 = layer_norm(&x, &p[l.ln1_g.clone()], &p[l.ln1_b.clone()]);
        let mut qkv = vec![0.0; t_len * 3 * d];
        matmul_add(&mut qkv, &ln1.out, &p[l.w_qkv.clone()], t_len, d, 3 * d);
        add_bias(&mut qkv, &p[l.b_qkv.clone()]);

        let mut probs = vec![0.0; heads * t_len * t_len];
        let mut attn = vec![0.0; t_len * d];
        for h in 0..heads {
            for i in 0..t_len {
                let q = &qkv[i * 3 * d + h * dh..i * 3 * d + (h + 1) * dh];
                let row = &mut probs[(h * t_len + i) * t_len..(h * t_len + i + 1) * t_len];
                let mut max = f64::NEG_INFINITY;
                for j in 0..=i {
                    let k = &qkv[j * 3 * d + d + h * dh..j * 3 * d + d + (h + 1) * dh];
                    let s = q.iter().zip(k).map(|(a, b)| a * b).sum::<f64>() * scale;
                    row[j] = s;
                    max = max.max(s);
                }
                let mut z = 0.0;
                for v in &mut row[..=i] {
                    *v = libm::exp(*v - max);
                    z += *v;
                }
                for v in &mut row[..=i] {
                    *v /= z;
                }
                let out = &mut attn[i * d + h * dh..i * d + (h + 1) * dh];
                for j in 0..=i {
                    let pj = row[j];
                    let v = &qkv[j * 3 * d + 2 * d + h * dh..j * 3 * d + 2 * d + (h + 1) * dh];
                    for (o, &vv) in out.iter_mut().zip(v) {
                        *o += pj * vv;
                    }
                }
            }
        }
        matmul_add(&mut x, &attn, &p[l.w_o.clone()], t_len, d, d);
        add_bias(&mut x, &p[l.b_o.clone()]);

        let ln2 = layer_norm(&x, &p[l.ln2_g.clone()], &p[l.ln2_b.clone()]);
        let mut fc_pre = vec![0.0; t_len * hd];
        matmul_add(&mut fc_pre, &ln2.out, &p[l.w_fc.clone()], t_len, d, hd);
        add_bias(&mut fc_pre, &p[l.b_fc.clone()]);
        let fc_act: Vec<f64> = fc_pre.iter().map(|&v| gelu(v)).collect();
        matmul_add(&mut x, &fc_act, &p[l.w_proj.clone()], t_len, hd, d);
        add_bias(&mut x, &p[l.b_proj.clone()]);

        layers.push(LayerCache {
            ln1,
            qkv,
            probs,
            attn,
            ln2,
            fc_pre,
            fc_act,
        });
    }

    let lnf = layer_norm(&x, &p[layout.lnf_g.clone()], &p[layout.lnf_b.clone()]);
    let v = layout.vocab;
    let mut logits = vec![0.0; t_len * v];
    matmul_add(&mut logits, &lnf.out, &p[layout.w_out.clone()], t_len, d, v);
    add_bias(&mut logits, &p[layout.b_out.clone()]);
    Cache {
        ids: ids.to_vec(),
        layers,
        lnf,
        logits,
    }
}

/// Accumulates parameter gradients into `grad` given `dlogits`.
pub fn backward(layout: &Layout, p: &[f64], cache: &Cache, dlogits: &[f64], grad: &mut [f64]) {
    let t_len = cache.ids.len();
    let d = layout.dim;
    let hd = layout.hidden;
    let heads = layout.heads;
    let dh = d / heads;
    let scale = 1.0 / libm::sqrt(dh as f64);
    let v = layout.vocab;

    matmul_at_add(
        &mut grad[layout.w_out.clone()],
        &cache.lnf.out,
        dlogits,
        t_len,
        d,
        v,
    );
    bias_grad(&mut grad[layout.b_out.clone()], dlogits);
    let mut d_lnf = vec![0.0; t_len * d];
    matmul_bt_add(&mut d_lnf, dlogits, &p[layout.w_out.clone()], t_len, d, v);
    let mut dx = vec![0.0; t_len * d];
    {
        let (dg, db) = split_pair(grad, &layout.lnf_g, &layout.lnf_b);
        layer_norm_backward(
            &cache.lnf,
            &d_lnf,
            &p[layout.lnf_g.clone()],
            &mut dx,
            dg,
            db,
        );
    }

    for (l, lc) in layout.layers.iter().zip(&cache.layers).rev() {
        // MLP block: x_out = h + proj(gelu(fc(ln2(h))))
        let mut d_act = vec![0.0; t_len * hd];
        matmul_at_add(&mut grad[l.w_proj.clone()], &lc.fc_act, &dx, t_len, hd, d);
        bias_grad(&mut grad[l.b_proj.clone()], &dx);
        matmul_bt_add(&mut d_act, &dx, &p[l.w_proj.clone()], t_len, hd, d);
        for (g, &pre) in d_act.iter_mut().zip(&lc.fc_pre) {
            *g *= gelu_grad(pre);
        }
        matmul_at_add(&mut grad[l.w_fc.clone()], &lc.ln2.out, &d_act, t_len, d, hd);
        bias_grad(&mut grad[l.b_fc.clone()], &d_act);
        let mut d_ln2 = vec![0.0; t_len * d];
        matmul_bt_add(&mut d_ln2, &d_act, &p[l.w_fc.clone()], t_len, d, hd);
        {
            let (dg, db) = split_pair(grad, &l.ln2_g, &l.ln2_b);
            layer_norm_backward(&lc.ln2, &d_ln2, &p[l.ln2_g.clone()], &mut dx, dg, db);
        }

        // Attention block: h = x_in + o(attn(ln1(x_in)))
        matmul_at_add(&mut grad[l.w_o.clone()], &lc.attn, &dx, t_len, d, d);
        bias_grad(&mut grad[l.b_o.clone()], &dx);
        let mut d_attn = vec![0.0; t_len * d];
        matmul_bt_add(&mut d_attn, &dx, &p[l.w_o.clone()], t_len, d, d);

        let mut d_qkv = vec![0.0; t_len * 3 * d];
        let mut dp = vec![0.0; t_len];
        for h in 0..heads {
            for i in 0..t_len {
                let row = &lc.probs[(h * t_len + i) * t_len..(h * t_len + i + 1) * t_len];
                let dout = &d_attn[i * d + h * dh..i * d + (h + 1) * dh];
                let mut dot = 0.0;
                for j in 0..=i {
                    let voff = j * 3 * d + 2 * d + h * dh;
                    let vj = &lc.qkv[voff..voff + dh];
                    dp[j] = dout.iter().zip(vj).map(|(a, b)| a * b).sum::<f64>();
                    dot += row[j] * dp[j];
                    for (g, &o) in d_qkv[voff..voff + dh].iter_mut().zip(dout) {
                        *g += row[j] * o;
                    }
                }
                let qoff = i * 3 * d + h * dh;
                for j in 0..=i {
                    let ds = row[j] * (dp[j] - dot) * scale;
                    if ds == 0.0 {
                        continue;
                    }
                    let koff = j * 3 * d + d + h * dh;
                    for c in 0..dh {
                        d_qkv[qoff + c] += ds * lc.qkv[koff + c];
                        d_qkv[koff + c] += ds * lc.qkv[qoff + c];
                    }
                }
            }
        }
        matmul_at_add(
            &mut grad[l.w_qkv.clone()],
            &lc.ln1.out,
            &d_qkv,
            t_len,
            d,
            3 * d,
        );
        bias_grad(&mut grad[l.b_qkv.clone()], &d_qkv);
        let mut d_ln1 = vec![0.0; t_len * d];
        matmul_bt_add(&mut d_ln1, &d_qkv, &p[l.w_qkv.clone()], t_len, d, 3 * d);
        {
            let (dg, db) = split_pair(grad, &l.ln1_g, &l.ln1_b);
            layer_norm_backward(&lc.ln1, &d_ln1, &p[l.ln1_g.clone()], &mut dx, dg, db);
        }
    }

    for (t, &id) in cache.ids.iter().enumerate() {
        let row = &dx[t * d..(t + 1) * d];
        let tok = layout.tok_emb.start + id * d;
        let pos = layout.pos_emb.start + t * d;
        for i in 0..d {
            grad[tok + i] += row[i];
            grad[pos + i] += row[i];
        }
    }
}

/// Disjoint mutable views of two adjacent tensors (`a` directly before `b`).
fn split_pair<'a>(
    grad: &'a mut [f64],
    a: &Range<usize>,
    b: &Range<usize>,
) -> (&'a mut [f64], &'a mut [f64]) {
    debug_assert_eq!(a.end, b.start);
    let (left, right) = grad[a.start..b.end].split_at_mut(a.len());
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_counts_parameters() {
        let cfg = ModelConfig {
            embedding_dim: 4,
            hidden_dim: 8,
            layer_count: 1,
            head_count: 2,
            context_len: 3,
            ..ModelConfig::default()
        };
        let l = Layout::new(&cfg, 10);
        let per_layer = 4 + 4 + 4 * 12 + 12 + 16 + 4 + 4 + 4 + 32 + 8 + 32 + 4;
        assert_eq!(l.len(), 10 * 4 + 3 * 4 + per_layer + 4 + 4 + 40 + 10);
    }

    #[test]
    fn causal_logits_ignore_future_tokens() {
        let cfg = ModelConfig {
            embedding_dim: 8,
            hidden_dim: 16,
            layer_count: 2,
            head_count: 2,
            context_len: 6,
            ..ModelConfig::default()
        };
        let layout = Layout::new(&cfg, 12);
        let p = layout.init(3);
        let a = forward(&layout, &p, &[1, 5, 6, 7]);
        let b = forward(&layout, &p, &[1, 5, 6, 9]);
        assert_eq!(&a.logits[..3 * 12], &b.logits[..3 * 12]);
        assert_ne!(&a.logits[3 * 12..], &b.logits[3 * 12..]);
    }
}
