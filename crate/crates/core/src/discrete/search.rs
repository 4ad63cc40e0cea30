//! Enumeration of canonical indicator patterns on a fixed grid resolution.

use crate::error::{Error, Result};
use crate::graph::Bigraph;

use super::cylinder::{advance, local_strides, DiscreteCylinderSet};

/// Per-resolution layout of the event tensors.
pub(crate) struct Layout {
    pub resolution: Vec<usize>,
    /// Number of local cells of each event.
    pub n_local: Vec<usize>,
    /// `slices[i][a][k]`: local cells of event `i` whose coordinate on its
    /// `a`-th variable equals `k`, in row-major order.
    slices: Vec<Vec<Vec<Vec<usize>>>>,
    /// Axes whose last incident event is `t`.
    closes_after: Vec<Vec<usize>>,
}

impl Layout {
    pub fn new(h: &Bigraph, resolution: &[usize]) -> Result<Self> {
        let n = h.n_events();
        let mut n_local = Vec::with_capacity(n);
        let mut slices = Vec::with_capacity(n);
        for i in 0..n {
            let vars = h.event_neighbors(i);
            let shape: Vec<usize> = vars.iter().map(|&j| resolution[j]).collect();
            let total: usize = shape.iter().product();
            if total > 64 {
                return Err(Error::CapExceeded {
                    what: "local cells per event",
                    limit: 64,
                    needed: total as u64,
                });
            }
            let mut per_axis: Vec<Vec<Vec<usize>>> = shape.iter().map(|&e| vec![Vec::new(); e]).collect();
            let mut idx = vec![0; shape.len()];
            for cell in 0..total {
                for (a, &k) in idx.iter().enumerate() {
                    per_axis[a][k].push(cell);
                }
                advance(&mut idx, &shape);
            }
            n_local.push(total);
            slices.push(per_axis);
        }
        let mut closes_after = vec![Vec::new(); n];
        for (j, &e) in resolution.iter().enumerate() {
            if let Some(&last) = h.variable_neighbors(j).last() {
                if e > 1 {
                    closes_after[last].push(j);
                }
            }
        }
        Ok(Layout {
            resolution: resolution.to_vec(),
            n_local,
            slices,
            closes_after,
        })
    }

    fn slice_bits(&self, event: usize, axis_pos: usize, k: usize, tensor: u64) -> u64 {
        let mut out = 0u64;
        for (b, &cell) in self.slices[event][axis_pos][k].iter().enumerate() {
            out |= ((tensor >> cell) & 1) << b;
        }
        out
    }

    /// Interval signatures of axis `j` are strictly increasing.
    fn axis_canonical(&self, h: &Bigraph, j: usize, tensors: &[u64]) -> bool {
        let sig = |k: usize| -> Vec<u64> {
            h.variable_neighbors(j)
                .iter()
                .map(|&i| {
                    let a = h.event_neighbors(i).binary_search(&j).expect("incident");
                    self.slice_bits(i, a, k, tensors[i])
                })
                .collect()
        };
        let mut prev = sig(0);
        for k in 1..self.resolution[j] {
            let cur = sig(k);
            if cur <= prev {
                return false;
            }
            prev = cur;
        }
        true
    }
}

/// All resolution vectors with `1 <= e_j <= caps[j]`, by increasing cell count.
pub(crate) fn resolutions(caps: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let shape: Vec<usize> = caps.to_vec();
    let total: usize = shape.iter().product();
    let mut idx = vec![0; shape.len()];
    for _ in 0..total {
        out.push(idx.iter().map(|k| k + 1).collect::<Vec<usize>>());
        advance(&mut idx, &shape);
    }
    out.sort_by_key(|e| (e.iter().product::<usize>(), e.clone()));
    out
}

/// Size of the unpruned indicator space over all resolutions.
pub(crate) fn raw_space(h: &Bigraph, caps: &[usize]) -> f64 {
    resolutions(caps)
        .iter()
        .map(|e| {
            let bits: usize = (0..h.n_events())
                .map(|i| h.event_neighbors(i).iter().map(|&j| e[j]).product::<usize>())
                .sum();
            2f64.powi(bits as i32)
        })
        .sum()
}

/// Visits every canonical pattern at one resolution whose event tensors all
/// pass `keep_event(event, tensor, n_local)`.
pub(crate) fn for_each_canonical(
    h: &Bigraph,
    layout: &Layout,
    keep_event: &dyn Fn(usize, u64, usize) -> bool,
    visit: &mut dyn FnMut(&[u64]),
) {
    for (j, &e) in layout.resolution.iter().enumerate() {
        if e > 1 && h.variable_degree(j) == 0 {
            return;
        }
    }
    let mut tensors = vec![0u64; h.n_events()];
    recurse(h, layout, 0, &mut tensors, keep_event, visit);
}

fn recurse(
    h: &Bigraph,
    layout: &Layout,
    t: usize,
    tensors: &mut Vec<u64>,
    keep_event: &dyn Fn(usize, u64, usize) -> bool,
    visit: &mut dyn FnMut(&[u64]),
) {
    if t == tensors.len() {
        visit(tensors);
        return;
    }
    let c = layout.n_local[t];
    let count: u128 = 1u128 << c;
    let mut v: u128 = 0;
    while v < count {
        let tensor = v as u64;
        v += 1;
        if !keep_event(t, tensor, c) {
            continue;
        }
        tensors[t] = tensor;
        if layout.closes_after[t].iter().all(|&j| layout.axis_canonical(h, j, tensors)) {
            recurse(h, layout, t + 1, tensors, keep_event, visit);
        }
    }
}

/// A pattern flattened onto the global grid for fast measure evaluation.
pub(crate) struct Compiled {
    pub resolution: Vec<usize>,
    pub tensors: Vec<u64>,
    /// Flat interval indices of covered cells, `m` per cell.
    idx: Vec<usize>,
    cover: Vec<u64>,
    n_events: usize,
    pub all_covered: bool,
}

impl Compiled {
    pub fn new(h: &Bigraph, resolution: &[usize], tensors: &[u64]) -> Self {
        let n = h.n_events();
        let m = resolution.len();
        let strides: Vec<Vec<usize>> = (0..n).map(|i| local_strides(h.event_neighbors(i), resolution)).collect();
        let total: usize = resolution.iter().product();
        let mut idx_flat = Vec::new();
        let mut cover = Vec::new();
        let mut all_covered = true;
        let mut idx = vec![0; m];
        for _ in 0..total {
            let mut mask = 0u64;
            for i in 0..n {
                let local: usize = h.event_neighbors(i).iter().zip(&strides[i]).map(|(&j, &s)| idx[j] * s).sum();
                if (tensors[i] >> local) & 1 == 1 {
                    mask |= 1 << i;
                }
            }
            if mask == 0 {
                all_covered = false;
            } else {
                idx_flat.extend_from_slice(&idx);
                cover.push(mask);
            }
            advance(&mut idx, resolution);
        }
        Compiled {
            resolution: resolution.to_vec(),
            tensors: tensors.to_vec(),
            idx: idx_flat,
            cover,
            n_events: n,
            all_covered,
        }
    }

    fn cell_idx(&self, c: usize) -> &[usize] {
        let m = self.resolution.len();
        &self.idx[c * m..(c + 1) * m]
    }

    /// Every local cell of every event is the sole cover of some grid cell.
    pub fn is_minimal(&self, h: &Bigraph) -> bool {
        let n = self.n_events;
        let strides: Vec<Vec<usize>> = (0..n).map(|i| local_strides(h.event_neighbors(i), &self.resolution)).collect();
        let mut essential = vec![0u64; n];
        for (c, &mask) in self.cover.iter().enumerate() {
            if mask.count_ones() == 1 {
                let i = mask.trailing_zeros() as usize;
                let idx = self.cell_idx(c);
                let local: usize = h.event_neighbors(i).iter().zip(&strides[i]).map(|(&j, &s)| idx[j] * s).sum();
                essential[i] |= 1 << local;
            }
        }
        (0..n).all(|i| self.tensors[i] & !essential[i] == 0)
    }

    /// No grid cell lies in two adjacent events.
    pub fn is_exclusive(&self, adjacent: &[(usize, usize)]) -> bool {
        self.cover
            .iter()
            .all(|&mask| adjacent.iter().all(|&(a, b)| mask & (1 << a) == 0 || mask & (1 << b) == 0))
    }

    /// Event measures and union measure for the given interval lengths.
    pub fn measures(&self, lengths: &[Vec<f64>], out: &mut [f64]) -> f64 {
        out.iter_mut().for_each(|x| *x = 0.0);
        let mut union = 0.0;
        for (c, &mask) in self.cover.iter().enumerate() {
            let w: f64 = self.cell_idx(c).iter().enumerate().map(|(j, &k)| lengths[j][k]).product();
            union += w;
            let mut bits = mask;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                out[i] += w;
                bits &= bits - 1;
            }
        }
        union
    }

    pub fn to_cylinder_set(&self, h: &Bigraph, lengths: Vec<Vec<f64>>) -> DiscreteCylinderSet {
        let strides: Vec<Vec<usize>> = (0..self.n_events)
            .map(|i| local_strides(h.event_neighbors(i), &self.resolution))
            .collect();
        DiscreteCylinderSet::from_fn(h, lengths, |i, idx| {
            let local: usize = idx.iter().zip(&strides[i]).map(|(k, s)| k * s).sum();
            (self.tensors[i] >> local) & 1 == 1
        })
    }
}

/// Maps an unconstrained vector to interval lengths per axis.
pub(crate) struct LengthMap {
    resolution: Vec<usize>,
    offsets: Vec<usize>,
    min_len: f64,
    pub dim: usize,
}

impl LengthMap {
    /// Every interval gets at least `min_len`; requires `e_j * min_len < 1`.
    pub fn new(resolution: &[usize], min_len: f64) -> Self {
        let mut offsets = Vec::with_capacity(resolution.len());
        let mut dim = 0;
        for &e in resolution {
            offsets.push(dim);
            if e > 1 {
                dim += e;
            }
        }
        LengthMap {
            resolution: resolution.to_vec(),
            offsets,
            min_len,
            dim,
        }
    }

    pub fn lengths(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.resolution
            .iter()
            .zip(&self.offsets)
            .map(|(&e, &o)| {
                if e == 1 {
                    return vec![1.0];
                }
                let raw: Vec<f64> = x[o..o + e].iter().map(|v| v.abs()).collect();
                let s: f64 = raw.iter().sum();
                let free = 1.0 - e as f64 * self.min_len;
                if s > 0.0 && s.is_finite() {
                    let mut out: Vec<f64> = raw.iter().map(|v| self.min_len + free * v / s).collect();
                    let head: f64 = out[..e - 1].iter().sum();
                    out[e - 1] = (1.0 - head).max(0.0);
                    out
                } else {
                    vec![1.0 / e as f64; e]
                }
            })
            .collect()
    }
}
