//! Per-iteration KKT systems via group-wise Schur complement elimination.
//!
//! Each Newton step reduces to two solves of
//!
//! ```text
//!     [ H   −Aᵀ ] [Δx]   [f]
//!     [ A    0  ] [Δz] = [g]
//! ```
//!
//! with H the NT scaling (zero on free components). Eliminating the cone
//! part of Δx yields the saddle system in (Δz, Δx_free) with the Schur
//! matrix G = A_c H⁻¹ A_cᵀ. Rows that share no cone block are uncoupled in
//! G, so G is block-diagonal over the connected components of the
//! row-coupling graph: each component is factored by a small dense
//! Cholesky, and only the free columns plus the pure-free rows (plus any
//! component whose factorization fails) enter a dense border system.

use super::nt::BlockScaling;
use super::svec;
use super::{ConeSpec, ConicProgram};
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use std::collections::HashMap;

/// Cone layout resolved to offsets.
pub struct Layout {
    pub specs: Vec<ConeSpec>,
    pub offsets: Vec<usize>,
    pub n: usize,
    pub free_cols: Vec<usize>,
    pub col_free_idx: Vec<usize>, // usize::MAX when not free
}

impl Layout {
    pub fn new(cones: &[ConeSpec]) -> Layout {
        let mut offsets = Vec::with_capacity(cones.len());
        let mut n = 0;
        for c in cones {
            offsets.push(n);
            n += c.dim();
        }
        let mut free_cols = Vec::new();
        let mut col_free_idx = vec![usize::MAX; n];
        for (spec, &off) in cones.iter().zip(offsets.iter()) {
            if let ConeSpec::Free { dim } = spec {
                for j in 0..*dim {
                    col_free_idx[off + j] = free_cols.len();
                    free_cols.push(off + j);
                }
            }
        }
        Layout { specs: cones.to_vec(), offsets, n, free_cols, col_free_idx }
    }

    pub fn num_free(&self) -> usize {
        self.free_cols.len()
    }
}

struct RowData {
    /// (free index, coefficient)
    free: Vec<(usize, f64)>,
    /// (cone block id, entries as (local index, coefficient))
    cone: Vec<(usize, Vec<(usize, f64)>)>,
}

struct Component {
    rows: Vec<usize>,
    row_pos: HashMap<usize, usize>,
    psd_blocks: Vec<usize>,
    nonneg_units: Vec<usize>,
    free_active: Vec<usize>,
}

pub struct KktContext {
    pub layout: Layout,
    rows: Vec<RowData>,
    components: Vec<Component>,
    /// Rows with no cone support at all.
    pure_free_rows: Vec<usize>,
    /// Per PSD cone block id: (row id, index into that row's cone list).
    psd_rows: Vec<Vec<(usize, usize)>>,
    /// Per flat nonneg unit: (row id, coefficient).
    nonneg_rows: Vec<Vec<(usize, f64)>>,
    /// Global column offset of each flat nonneg unit.
    nonneg_unit_col: Vec<usize>,
    /// Cone block id and local index for each flat nonneg unit.
    m: usize,
}

impl KktContext {
    pub fn new(prog: &ConicProgram) -> KktContext {
        let layout = Layout::new(&prog.cones);
        let m = prog.num_rows();

        // map each global column to (block id, local idx)
        let mut col_block = vec![usize::MAX; layout.n];
        let mut col_local = vec![0usize; layout.n];
        for (bid, (spec, &off)) in layout.specs.iter().zip(layout.offsets.iter()).enumerate() {
            for j in 0..spec.dim() {
                col_block[off + j] = bid;
                col_local[off + j] = j;
            }
        }

        // flat nonneg units
        let mut nonneg_unit_col = Vec::new();
        let mut unit_of_col: HashMap<usize, usize> = HashMap::new();
        for (spec, &off) in layout.specs.iter().zip(layout.offsets.iter()) {
            if let ConeSpec::Nonneg { dim } = spec {
                for j in 0..*dim {
                    unit_of_col.insert(off + j, nonneg_unit_col.len());
                    nonneg_unit_col.push(off + j);
                }
            }
        }

        let mut rows = Vec::with_capacity(m);
        let mut psd_rows: Vec<Vec<(usize, usize)>> = vec![Vec::new(); layout.specs.len()];
        let mut nonneg_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nonneg_unit_col.len()];
        for (r, row) in prog.rows.iter().enumerate() {
            let mut free = Vec::new();
            let mut per_block: HashMap<usize, Vec<(usize, f64)>> = HashMap::new();
            for &(col, v) in row {
                if v == 0.0 {
                    continue;
                }
                let fidx = layout.col_free_idx[col];
                if fidx != usize::MAX {
                    free.push((fidx, v));
                } else {
                    per_block.entry(col_block[col]).or_default().push((col_local[col], v));
                }
            }
            let mut cone: Vec<(usize, Vec<(usize, f64)>)> = per_block.into_iter().collect();
            cone.sort_by_key(|(bid, _)| *bid);
            for (pos, (bid, entries)) in cone.iter().enumerate() {
                match layout.specs[*bid] {
                    ConeSpec::Psd { .. } => psd_rows[*bid].push((r, pos)),
                    ConeSpec::Nonneg { .. } => {
                        let off = layout.offsets[*bid];
                        for &(local, v) in entries {
                            nonneg_rows[unit_of_col[&(off + local)]].push((r, v));
                        }
                    }
                    ConeSpec::Free { .. } => unreachable!(),
                }
            }
            rows.push(RowData { free, cone });
        }

        // union-find rows through shared coupling units
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(parent: &mut Vec<usize>, mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        let link = |parent: &mut Vec<usize>, rows: &[usize]| {
            for w in rows.windows(2) {
                let (ra, rb) = (find(parent, w[0]), find(parent, w[1]));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        };
        for list in &psd_rows {
            let rs: Vec<usize> = list.iter().map(|&(r, _)| r).collect();
            link(&mut parent, &rs);
        }
        for list in &nonneg_rows {
            let rs: Vec<usize> = list.iter().map(|&(r, _)| r).collect();
            link(&mut parent, &rs);
        }

        let mut comp_of_root: HashMap<usize, usize> = HashMap::new();
        let mut components: Vec<Component> = Vec::new();
        let mut pure_free_rows = Vec::new();
        for r in 0..m {
            if rows[r].cone.is_empty() {
                pure_free_rows.push(r);
                continue;
            }
            let root = find(&mut parent, r);
            let cid = *comp_of_root.entry(root).or_insert_with(|| {
                components.push(Component {
                    rows: Vec::new(),
                    row_pos: HashMap::new(),
                    psd_blocks: Vec::new(),
                    nonneg_units: Vec::new(),
                    free_active: Vec::new(),
                });
                components.len() - 1
            });
            let c = &mut components[cid];
            c.row_pos.insert(r, c.rows.len());
            c.rows.push(r);
        }
        // attach coupling units and active free columns per component
        for (bid, list) in psd_rows.iter().enumerate() {
            if let Some(&(r0, _)) = list.first() {
                let root = find(&mut parent, r0);
                components[comp_of_root[&root]].psd_blocks.push(bid);
            }
        }
        for (uid, list) in nonneg_rows.iter().enumerate() {
            if let Some(&(r0, _)) = list.first() {
                let root = find(&mut parent, r0);
                components[comp_of_root[&root]].nonneg_units.push(uid);
            }
        }
        for c in &mut components {
            let mut af: Vec<usize> = c
                .rows
                .iter()
                .flat_map(|&r| rows[r].free.iter().map(|&(f, _)| f))
                .collect();
            af.sort_unstable();
            af.dedup();
            c.free_active = af;
        }

        KktContext {
            layout,
            rows,
            components,
            pure_free_rows,
            psd_rows,
            nonneg_rows,
            nonneg_unit_col,
            m,
        }
    }

    pub fn factorize<'a>(
        &'a self,
        scalings: &'a [BlockScaling],
        reg: f64,
    ) -> Option<KktFactors<'a>> {
        // H⁻¹-columns per PSD block: one svec(T·mat(aᵣ)·T) per touching row
        let mut psd_hcols: Vec<DMatrix<f64>> = Vec::with_capacity(self.psd_rows.len());
        for (bid, list) in self.psd_rows.iter().enumerate() {
            if list.is_empty() {
                psd_hcols.push(DMatrix::zeros(0, 0));
                continue;
            }
            let (side, t) = match &scalings[bid] {
                BlockScaling::Psd { side, t, .. } => (*side, t),
                _ => unreachable!("psd rows on non-psd block"),
            };
            let dim = svec::tri(side);
            let mut cols = DMatrix::zeros(dim, list.len());
            for (k, &(r, pos)) in list.iter().enumerate() {
                let entries = &self.rows[r].cone[pos].1;
                let mut out = cols.column_mut(k);
                if 2 * entries.len() < side {
                    // rank-structured: T·mat(a)·T as a sum of outer products
                    let mut d = DMatrix::zeros(side, side);
                    for &(idx, coeff) in entries {
                        let (i, j) = tri_unindex(idx);
                        let v = if i == j { coeff } else { coeff / svec::SQRT2 };
                        let ti = t.column(i);
                        let tj = t.column(j);
                        if i == j {
                            d.ger(v, &ti, &tj, 1.0);
                        } else {
                            d.ger(v, &ti, &tj, 1.0);
                            d.ger(v, &tj, &ti, 1.0);
                        }
                    }
                    let mut buf = vec![0.0; dim];
                    svec::write_svec(&d, &mut buf);
                    for (o, v) in out.iter_mut().zip(buf.iter()) {
                        *o = *v;
                    }
                } else {
                    let mut a = vec![0.0; dim];
                    for &(idx, coeff) in entries {
                        a[idx] = coeff;
                    }
                    let mat = svec::from_svec(&a, side);
                    let d = t * mat * t;
                    let mut buf = vec![0.0; dim];
                    svec::write_svec(&d, &mut buf);
                    for (o, v) in out.iter_mut().zip(buf.iter()) {
                        *o = *v;
                    }
                }
            }
            psd_hcols.push(cols);
            let _ = bid;
        }

        // assemble and factor each component
        let mut comp_chol: Vec<Option<Cholesky<f64, Dyn>>> = Vec::new();
        let mut comp_w: Vec<DMatrix<f64>> = Vec::new();
        let mut failed_gs: Vec<Option<DMatrix<f64>>> = Vec::new();
        for comp in &self.components {
            let nc = comp.rows.len();
            let mut g = DMatrix::zeros(nc, nc);
            for &uid in &comp.nonneg_units {
                let col = self.nonneg_unit_col[uid];
                let hinv = self.hinv_nonneg(scalings, col);
                let list = &self.nonneg_rows[uid];
                for (a, &(ra, ca)) in list.iter().enumerate() {
                    let la = comp.row_pos[&ra];
                    for &(rb, cb) in list.iter().skip(a) {
                        let lb = comp.row_pos[&rb];
                        let v = ca * hinv * cb;
                        g[(la, lb)] += v;
                        if la != lb {
                            g[(lb, la)] += v;
                        }
                    }
                }
            }
            for &bid in &comp.psd_blocks {
                let list = &self.psd_rows[bid];
                let hcols = &psd_hcols[bid];
                for (a, &(ra, _)) in list.iter().enumerate() {
                    let la = comp.row_pos[&ra];
                    let hcol = hcols.column(a);
                    for &(rb, posb) in list.iter().skip(a) {
                        let lb = comp.row_pos[&rb];
                        let entries = &self.rows[rb].cone[posb].1;
                        let mut dot = 0.0;
                        for &(idx, coeff) in entries {
                            dot += coeff * hcol[idx];
                        }
                        g[(la, lb)] += dot;
                        if la != lb {
                            g[(lb, la)] += dot;
                        }
                    }
                }
            }
            for i in 0..nc {
                g[(i, i)] += reg;
            }
            match g.clone().cholesky() {
                Some(ch) => {
                    // W = G⁻¹ A_fC for the border Schur complement
                    let af = &comp.free_active;
                    let w = if af.is_empty() {
                        DMatrix::zeros(nc, 0)
                    } else {
                        let mut afc = DMatrix::zeros(nc, af.len());
                        for (lr, &r) in comp.rows.iter().enumerate() {
                            for &(fidx, v) in &self.rows[r].free {
                                let k = af.binary_search(&fidx).unwrap();
                                afc[(lr, k)] = v;
                            }
                        }
                        ch.solve(&afc)
                    };
                    comp_chol.push(Some(ch));
                    comp_w.push(w);
                    failed_gs.push(None);
                }
                None => {
                    comp_chol.push(None);
                    comp_w.push(DMatrix::zeros(0, 0));
                    failed_gs.push(Some(g));
                }
            }
        }

        // border: free columns + pure-free rows + rows of failed components
        let n_free = self.layout.num_free();
        let mut border_rows: Vec<usize> = self.pure_free_rows.clone();
        for (cid, comp) in self.components.iter().enumerate() {
            if comp_chol[cid].is_none() {
                border_rows.extend(comp.rows.iter().copied());
            }
        }
        border_rows.sort_unstable();
        let nb = n_free + border_rows.len();
        let border_pos: HashMap<usize, usize> =
            border_rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();

        let mut b = DMatrix::zeros(nb, nb);
        // top-left: −Σ A_fCᵀ G_C⁻¹ A_fC − reg·I
        for (cid, comp) in self.components.iter().enumerate() {
            if comp_chol[cid].is_none() || comp.free_active.is_empty() {
                continue;
            }
            let af = &comp.free_active;
            let w = &comp_w[cid];
            let mut afc = DMatrix::zeros(comp.rows.len(), af.len());
            for (lr, &r) in comp.rows.iter().enumerate() {
                for &(fidx, v) in &self.rows[r].free {
                    let k = af.binary_search(&fidx).unwrap();
                    afc[(lr, k)] = v;
                }
            }
            let s_local = afc.transpose() * w;
            for (ka, &fa) in af.iter().enumerate() {
                for (kb, &fb) in af.iter().enumerate() {
                    b[(fa, fb)] -= s_local[(ka, kb)];
                }
            }
        }
        for i in 0..n_free {
            b[(i, i)] -= reg;
        }
        // bottom-right: failed component blocks (+reg), pure-free rows (+reg)
        for (cid, comp) in self.components.iter().enumerate() {
            if let Some(g) = &failed_gs[cid] {
                for (la, &ra) in comp.rows.iter().enumerate() {
                    let pa = n_free + border_pos[&ra];
                    for (lb, &rb) in comp.rows.iter().enumerate() {
                        let pb = n_free + border_pos[&rb];
                        b[(pa, pb)] += g[(la, lb)];
                    }
                }
            }
        }
        for k in 0..border_rows.len() {
            b[(n_free + k, n_free + k)] += reg;
        }
        // off-diagonal: free coefficients of border rows
        for (&r, k) in border_pos.iter() {
            for &(fidx, v) in &self.rows[r].free {
                b[(fidx, n_free + k)] = v;
                b[(n_free + k, fidx)] = v;
            }
        }

        let border_lu = if nb > 0 { Some(b.lu()) } else { None };

        Some(KktFactors {
            ctx: self,
            scalings,
            comp_chol,
            comp_w,
            border_lu,
            border_rows,
            n_free,
        })
    }

    fn hinv_nonneg(&self, scalings: &[BlockScaling], col: usize) -> f64 {
        // find cone block containing col
        for (bid, (spec, &off)) in
            self.layout.specs.iter().zip(self.layout.offsets.iter()).enumerate()
        {
            if col >= off && col < off + spec.dim() {
                if let BlockScaling::Nonneg { hinv, .. } = &scalings[bid] {
                    return hinv[col - off];
                }
            }
        }
        unreachable!("nonneg unit column not found")
    }
}

fn tri_unindex(idx: usize) -> (usize, usize) {
    // inverse of j(j+1)/2 + i with i ≤ j
    let j = ((((8 * idx + 1) as f64).sqrt() - 1.0) / 2.0) as usize;
    let j = if (j + 1) * (j + 2) / 2 <= idx { j + 1 } else { j };
    let i = idx - j * (j + 1) / 2;
    (i, j)
}

pub struct KktFactors<'a> {
    ctx: &'a KktContext,
    scalings: &'a [BlockScaling],
    comp_chol: Vec<Option<Cholesky<f64, Dyn>>>,
    comp_w: Vec<DMatrix<f64>>,
    border_lu: Option<nalgebra::LU<f64, Dyn, Dyn>>,
    border_rows: Vec<usize>,
    n_free: usize,
}

impl<'a> KktFactors<'a> {
    /// Solves the saddle system for one right-hand side, with iterative
    /// refinement against the full residual. Near the central-path boundary
    /// the H-part of the residual is cancellation-limited, so a refinement
    /// round is kept only when it measurably improves the residual.
    pub fn solve(&self, f: &[f64], g: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let (mut dx, mut dz) = self.solve_once(f, g);
        let scale = 1.0
            + f.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
            + g.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let (mut rf, mut rg) = self.residual(f, g, &dx, &dz);
        let mut err = rf.iter().chain(rg.iter()).fold(0.0f64, |a, &v| a.max(v.abs()));
        for _ in 0..3 {
            if err <= 1e-13 * scale {
                break;
            }
            let (cx, cz) = self.solve_once(&rf, &rg);
            let nx: Vec<f64> = dx.iter().zip(cx.iter()).map(|(a, b)| a + b).collect();
            let nz: Vec<f64> = dz.iter().zip(cz.iter()).map(|(a, b)| a + b).collect();
            let (nrf, nrg) = self.residual(f, g, &nx, &nz);
            let nerr = nrf.iter().chain(nrg.iter()).fold(0.0f64, |a, &v| a.max(v.abs()));
            if nerr >= err {
                break;
            }
            let slow = nerr > 0.5 * err;
            dx = nx;
            dz = nz;
            rf = nrf;
            rg = nrg;
            err = nerr;
            if slow {
                break;
            }
        }
        (dx, dz)
    }

    fn solve_once(&self, f: &[f64], g: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let ctx = self.ctx;
        let layout = &ctx.layout;
        let n = layout.n;
        let m = ctx.m;

        // hf = H⁻¹ f on cone components
        let mut hf = vec![0.0; n];
        for (bid, (spec, &off)) in layout.specs.iter().zip(layout.offsets.iter()).enumerate() {
            let d = spec.dim();
            self.scalings[bid].apply_hinv(&f[off..off + d], &mut hf[off..off + d]);
        }

        // q = g − A_c·hf
        let mut q = vec![0.0; m];
        for (r, row) in ctx.rows.iter().enumerate() {
            let mut acc = g[r];
            for (bid, entries) in &row.cone {
                let off = layout.offsets[*bid];
                for &(local, v) in entries {
                    acc -= v * hf[off + local];
                }
            }
            q[r] = acc;
        }

        // border rhs
        let nb = self.n_free + self.border_rows.len();
        let mut rhs = DVector::zeros(nb);
        for (k, &col) in layout.free_cols.iter().enumerate() {
            rhs[k] = -f[col];
        }
        for (cid, comp) in ctx.components.iter().enumerate() {
            if self.comp_chol[cid].is_none() || comp.free_active.is_empty() {
                continue;
            }
            let qc = DVector::from_fn(comp.rows.len(), |i, _| q[comp.rows[i]]);
            let contrib = self.comp_w[cid].transpose() * qc;
            for (k, &fa) in comp.free_active.iter().enumerate() {
                rhs[fa] -= contrib[k];
            }
        }
        for (k, &r) in self.border_rows.iter().enumerate() {
            rhs[self.n_free + k] = q[r];
        }

        let sol = match &self.border_lu {
            Some(lu) => lu.solve(&rhs).unwrap_or_else(|| DVector::zeros(nb)),
            None => rhs,
        };

        // recover Δz
        let mut dz = vec![0.0; m];
        for (k, &r) in self.border_rows.iter().enumerate() {
            dz[r] = sol[self.n_free + k];
        }
        for (cid, comp) in ctx.components.iter().enumerate() {
            let Some(ch) = &self.comp_chol[cid] else { continue };
            let mut qc = DVector::from_fn(comp.rows.len(), |i, _| q[comp.rows[i]]);
            ch.solve_mut(&mut qc);
            if !comp.free_active.is_empty() {
                let xf = DVector::from_fn(comp.free_active.len(), |i, _| sol[comp.free_active[i]]);
                qc -= &self.comp_w[cid] * xf;
            }
            for (i, &r) in comp.rows.iter().enumerate() {
                dz[r] = qc[i];
            }
        }

        // Δx: free from border solution, cone via H⁻¹(f + AᵀΔz)
        let mut at_dz = vec![0.0; n];
        for (r, row) in ctx.rows.iter().enumerate() {
            let zr = dz[r];
            if zr == 0.0 {
                continue;
            }
            for &(fidx, v) in &row.free {
                at_dz[layout.free_cols[fidx]] += v * zr;
            }
            for (bid, entries) in &row.cone {
                let off = layout.offsets[*bid];
                for &(local, v) in entries {
                    at_dz[off + local] += v * zr;
                }
            }
        }
        let mut dx = vec![0.0; n];
        for (bid, (spec, &off)) in layout.specs.iter().zip(layout.offsets.iter()).enumerate() {
            let d = spec.dim();
            if matches!(spec, ConeSpec::Free { .. }) {
                continue;
            }
            let input: Vec<f64> =
                (0..d).map(|i| f[off + i] + at_dz[off + i]).collect();
            self.scalings[bid].apply_hinv(&input, &mut dx[off..off + d]);
        }
        for (k, &col) in layout.free_cols.iter().enumerate() {
            dx[col] = sol[k];
        }
        (dx, dz)
    }

    /// Residual of the full saddle system at (dx, dz).
    fn residual(&self, f: &[f64], g: &[f64], dx: &[f64], dz: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let ctx = self.ctx;
        let layout = &ctx.layout;
        let n = layout.n;

        let mut hdx = vec![0.0; n];
        for (bid, (spec, &off)) in layout.specs.iter().zip(layout.offsets.iter()).enumerate() {
            let d = spec.dim();
            self.scalings[bid].apply_h(&dx[off..off + d], &mut hdx[off..off + d]);
        }
        let mut at_dz = vec![0.0; n];
        for (r, row) in ctx.rows.iter().enumerate() {
            let zr = dz[r];
            if zr == 0.0 {
                continue;
            }
            for &(fidx, v) in &row.free {
                at_dz[layout.free_cols[fidx]] += v * zr;
            }
            for (bid, entries) in &row.cone {
                let off = layout.offsets[*bid];
                for &(local, v) in entries {
                    at_dz[off + local] += v * zr;
                }
            }
        }
        let rf: Vec<f64> = (0..n).map(|i| f[i] - hdx[i] + at_dz[i]).collect();
        let mut rg = g.to_vec();
        for (r, row) in ctx.rows.iter().enumerate() {
            let mut acc = 0.0;
            for &(fidx, v) in &row.free {
                acc += v * dx[layout.free_cols[fidx]];
            }
            for (bid, entries) in &row.cone {
                let off = layout.offsets[*bid];
                for &(local, v) in entries {
                    acc += v * dx[off + local];
                }
            }
            rg[r] -= acc;
        }
        (rf, rg)
    }
}
