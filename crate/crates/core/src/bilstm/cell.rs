//! Single-direction LSTM kernels: forward over a sequence with a cached
//! trace, and backpropagation through time from a gradient on the final
//! hidden state.
//!
//! Gates are stacked in the order input, forget, output, candidate. Each
//! gate row of the weight matrix spans `[x_t ; h_{t-1}]`:
//!
//! ```text
//! i = sigmoid(W_i z + b_i)   f = sigmoid(W_f z + b_f)   o = sigmoid(W_o z + b_o)
//! g = tanh(W_g z + b_g)      c_t = f * c_{t-1} + i * g  h_t = o * tanh(c_t)
//! ```

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{sigmoid, tanh};

use super::LstmDirectionParams;

pub const GATE_INPUT: usize = 0;
pub const GATE_FORGET: usize = 1;
pub const GATE_OUTPUT: usize = 2;
pub const GATE_CANDIDATE: usize = 3;

/// Activations of one direction over a whole word.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionTrace {
    pub steps: usize,
    pub hidden: usize,
    /// `steps x 4h`, activated gate values.
    pub gates: Vec<f64>,
    /// `(steps + 1) x h`, row 0 is the zero initial state.
    pub cells: Vec<f64>,
    pub hiddens: Vec<f64>,
    /// `steps x h`, `tanh(c_t)`.
    pub cell_tanh: Vec<f64>,
}

impl DirectionTrace {
    pub fn gate(&self, t: usize, gate: usize) -> &[f64] {
        let h = self.hidden;
        let start = t * 4 * h + gate * h;
        &self.gates[start..start + h]
    }

    pub fn cell(&self, t: usize) -> &[f64] {
        &self.cells[(t + 1) * self.hidden..(t + 2) * self.hidden]
    }

    pub fn hidden_state(&self, t: usize) -> &[f64] {
        &self.hiddens[(t + 1) * self.hidden..(t + 2) * self.hidden]
    }

    pub fn final_hidden(&self) -> &[f64] {
        &self.hiddens[self.steps * self.hidden..]
    }
}

/// Runs the direction over `inputs` (each of length `d`) in the given order.
pub fn forward<'a>(
    params: &LstmDirectionParams,
    inputs: impl ExactSizeIterator<Item = &'a [f64]>,
) -> DirectionTrace {
    let (d, h) = (params.input_dim(), params.hidden_dim());
    let width = d + h;
    let steps = inputs.len();
    let mut trace = DirectionTrace {
        steps,
        hidden: h,
        gates: vec![0.0; steps * 4 * h],
        cells: vec![0.0; (steps + 1) * h],
        hiddens: vec![0.0; (steps + 1) * h],
        cell_tanh: vec![0.0; steps * h],
    };
    let w = params.weights();
    let b = params.bias();
    for (t, x) in inputs.enumerate() {
        debug_assert_eq!(x.len(), d);
        let (prev_h, _) = trace.hiddens[t * h..].split_at(h);
        let gates = &mut trace.gates[t * 4 * h..(t + 1) * 4 * h];
        for (r, pre) in gates.iter_mut().enumerate() {
            let row = &w[r * width..(r + 1) * width];
            let (wx, wh) = row.split_at(d);
            let mut acc = b[r];
            for (a, v) in wx.iter().zip(x) {
                acc += a * v;
            }
            for (a, v) in wh.iter().zip(prev_h) {
                acc += a * v;
            }
            *pre = if r / h == GATE_CANDIDATE { tanh(acc) } else { sigmoid(acc) };
        }
        for j in 0..h {
            let i = gates[GATE_INPUT * h + j];
            let f = gates[GATE_FORGET * h + j];
            let o = gates[GATE_OUTPUT * h + j];
            let g = gates[GATE_CANDIDATE * h + j];
            let c = f * trace.cells[t * h + j] + i * g;
            let tc = tanh(c);
            trace.cells[(t + 1) * h + j] = c;
            trace.cell_tanh[t * h + j] = tc;
            trace.hiddens[(t + 1) * h + j] = o * tc;
        }
    }
    trace
}

/// Backpropagates `d_final` (gradient on the last hidden state) through the
/// trace. Parameter gradients are accumulated into `grads`; the gradient
/// with respect to each step's input is handed to `on_input(t, dx)`.
pub fn backward<'a>(
    params: &LstmDirectionParams,
    trace: &DirectionTrace,
    inputs: impl DoubleEndedIterator<Item = &'a [f64]> + ExactSizeIterator,
    d_final: &[f64],
    grads: &mut LstmDirectionParams,
    mut on_input: impl FnMut(usize, &[f64]),
) {
    let (d, h) = (params.input_dim(), params.hidden_dim());
    let width = d + h;
    let w = params.weights();
    let mut dh = d_final.to_vec();
    let mut dc_next = vec![0.0; h];
    let mut da = vec![0.0; 4 * h];
    let mut dz = vec![0.0; width];
    let steps = inputs.len();
    for (t, x) in inputs.enumerate().rev() {
        debug_assert!(t < steps);
        let gates = &trace.gates[t * 4 * h..(t + 1) * 4 * h];
        let c_prev = &trace.cells[t * h..(t + 1) * h];
        let h_prev = &trace.hiddens[t * h..(t + 1) * h];
        for j in 0..h {
            let i = gates[GATE_INPUT * h + j];
            let f = gates[GATE_FORGET * h + j];
            let o = gates[GATE_OUTPUT * h + j];
            let g = gates[GATE_CANDIDATE * h + j];
            let tc = trace.cell_tanh[t * h + j];
            let dc = dc_next[j] + dh[j] * o * (1.0 - tc * tc);
            let d_o = dh[j] * tc;
            da[GATE_INPUT * h + j] = dc * g * i * (1.0 - i);
            da[GATE_FORGET * h + j] = dc * c_prev[j] * f * (1.0 - f);
            da[GATE_OUTPUT * h + j] = d_o * o * (1.0 - o);
            da[GATE_CANDIDATE * h + j] = dc * i * (1.0 - g * g);
            dc_next[j] = dc * f;
        }
        dz.iter_mut().for_each(|v| *v = 0.0);
        let (gw, gb) = grads.parts_mut();
        for (r, &a) in da.iter().enumerate() {
            gb[r] += a;
            if a == 0.0 {
                continue;
            }
            let row = &w[r * width..(r + 1) * width];
            let grow = &mut gw[r * width..(r + 1) * width];
            let (gx, gh) = grow.split_at_mut(d);
            for (g, v) in gx.iter_mut().zip(x) {
                *g += a * v;
            }
            for (g, v) in gh.iter_mut().zip(h_prev) {
                *g += a * v;
            }
            for (z, wv) in dz.iter_mut().zip(row) {
                *z += a * wv;
            }
        }
        on_input(t, &dz[..d]);
        dh.copy_from_slice(&dz[d..]);
    }
}
