//! Layer-by-layer generator for the {5,4} pentagonal tiling of the
//! hyperbolic disk with a radial cutoff.
//!
//! Layers grow by spawning an edge-child on every free tile edge of the
//! previous frontier and a corner-child on every vertex touched by a single
//! tile; vertices already shared by two tiles are completed by a lateral
//! edge between the adjacent new children. The dual graph used by the codes
//! has a bulk vertex per tile, an edge per shared tile edge, and a dangling
//! edge with a boundary vertex per free tile edge at the cutoff.

use crate::graph::{LabeledGraph, PlanarEmbedding};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TileKind {
    Center,
    EdgeChild,
    CornerChild,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    /// Contracted with the given tile at the given slot.
    Bulk(usize, usize),
    /// Dangling leg with the given boundary index.
    Boundary(usize),
    Open,
}

#[derive(Debug, Clone)]
pub struct Tile {
    pub kind: TileKind,
    pub layer: usize,
    pub slots: [Slot; 5],
}

#[derive(Debug, Clone)]
pub struct Tiling {
    pub tiles: Vec<Tile>,
    /// Boundary legs in cyclic order: (tile, slot).
    pub boundary: Vec<(usize, usize)>,
    pub cutoff: usize,
}

#[derive(Debug, Clone, Copy)]
enum Frontier {
    Free(usize, usize),
    Deep,
    Shared,
}

impl Tiling {
    pub fn generate(cutoff: usize) -> Tiling {
        let mut tiles = vec![Tile {
            kind: TileKind::Center,
            layer: 0,
            slots: [Slot::Open; 5],
        }];
        // Frontier of layer 0: the five free edges with deep vertices between.
        let mut frontier: Vec<Frontier> = Vec::new();
        for s in 0..5 {
            frontier.push(Frontier::Free(0, s));
            frontier.push(Frontier::Deep);
        }
        for layer in 1..=cutoff {
            let mut ring: Vec<usize> = Vec::new();
            let mut prev_open: Option<(usize, usize)> = None;
            let mut first_left: Option<usize> = None;
            let connect = |tiles: &mut Vec<Tile>, a: (usize, usize), b: (usize, usize)| {
                tiles[a.0].slots[a.1] = Slot::Bulk(b.0, b.1);
                tiles[b.0].slots[b.1] = Slot::Bulk(a.0, a.1);
            };
            for item in frontier.iter() {
                match *item {
                    Frontier::Free(t, s) => {
                        // Edge child: slot 0 parent, 1 left lateral,
                        // 2 and 3 free, 4 right lateral.
                        let id = tiles.len();
                        tiles.push(Tile {
                            kind: TileKind::EdgeChild,
                            layer,
                            slots: [Slot::Open; 5],
                        });
                        connect(&mut tiles, (t, s), (id, 0));
                        if let Some(prev) = prev_open {
                            connect(&mut tiles, prev, (id, 1));
                        } else {
                            first_left = Some(id);
                        }
                        prev_open = Some((id, 4));
                        ring.push(id);
                    }
                    Frontier::Deep => {
                        // Corner child: slot 0 left lateral, 1..3 free,
                        // 4 right lateral.
                        let id = tiles.len();
                        tiles.push(Tile {
                            kind: TileKind::CornerChild,
                            layer,
                            slots: [Slot::Open; 5],
                        });
                        if let Some(prev) = prev_open {
                            connect(&mut tiles, prev, (id, 0));
                        } else {
                            first_left = Some(id);
                        }
                        prev_open = Some((id, 4));
                        ring.push(id);
                    }
                    Frontier::Shared => {
                        // The two adjacent children connect directly; keep
                        // prev_open so the next child picks it up.
                    }
                }
            }
            // Close the ring.
            if let (Some(prev), Some(first)) = (prev_open, first_left) {
                let left_slot = match tiles[first].kind {
                    TileKind::EdgeChild => 1,
                    TileKind::CornerChild => 0,
                    TileKind::Center => unreachable!(),
                };
                tiles[first].slots[left_slot] = Slot::Bulk(prev.0, prev.1);
                tiles[prev.0].slots[prev.1] = Slot::Bulk(first, left_slot);
            }
            // New frontier.
            let mut next = Vec::new();
            for (pos, &t) in ring.iter().enumerate() {
                let free_slots: Vec<usize> = match tiles[t].kind {
                    TileKind::EdgeChild => vec![2, 3],
                    TileKind::CornerChild => vec![1, 2, 3],
                    TileKind::Center => unreachable!(),
                };
                for (k, &s) in free_slots.iter().enumerate() {
                    next.push(Frontier::Free(t, s));
                    if k + 1 < free_slots.len() {
                        next.push(Frontier::Deep);
                    }
                }
                let _ = pos;
                next.push(Frontier::Shared);
            }
            frontier = next;
        }
        // Remaining free slots become boundary legs in frontier cyclic order.
        let mut boundary = Vec::new();
        if cutoff == 0 {
            for s in 0..5 {
                boundary.push((0usize, s));
            }
        } else {
            for item in &frontier {
                if let Frontier::Free(t, s) = *item {
                    boundary.push((t, s));
                }
            }
        }
        for (bi, &(t, s)) in boundary.iter().enumerate() {
            tiles[t].slots[s] = Slot::Boundary(bi);
        }
        Tiling {
            tiles,
            boundary,
            cutoff,
        }
    }

    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary.len()
    }

    /// Shared tile edges as (tile_a, slot_a, tile_b, slot_b), a < b, sorted.
    pub fn bulk_edges(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for (a, tile) in self.tiles.iter().enumerate() {
            for (sa, slot) in tile.slots.iter().enumerate() {
                if let Slot::Bulk(b, sb) = *slot {
                    if a < b {
                        out.push((a, sa, b, sb));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Independent recount of layer populations from the growth recurrences
    /// e_{n+1} = 2e_n + 3c_n, c_{n+1} = e_n + 2c_n, (e_1, c_1) = (5, 5),
    /// plus per-layer handshake of lateral edges.
    pub fn recount_matches(&self) -> bool {
        let mut by_layer: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for t in &self.tiles {
            if t.layer == 0 {
                continue;
            }
            let e = by_layer.entry(t.layer).or_insert((0, 0));
            match t.kind {
                TileKind::EdgeChild => e.0 += 1,
                TileKind::CornerChild => e.1 += 1,
                TileKind::Center => {}
            }
        }
        let (mut e_n, mut c_n) = (5usize, 5usize);
        for layer in 1..=self.cutoff {
            match by_layer.get(&layer) {
                Some(&(e, c)) => {
                    if (e, c) != (e_n, c_n) {
                        return false;
                    }
                }
                None => return false,
            }
            let e_next = 2 * e_n + 3 * c_n;
            let c_next = e_n + 2 * c_n;
            e_n = e_next;
            c_n = c_next;
        }
        // Boundary count at the cutoff: free edges of the outermost layer.
        let expected_boundary = if self.cutoff == 0 {
            5
        } else {
            let (e, c) = by_layer[&self.cutoff];
            2 * e + 3 * c
        };
        if expected_boundary != self.boundary.len() {
            return false;
        }
        // Handshake: 5·F = 2·E_shared + B.
        let shared = self.bulk_edges().len();
        5 * self.tiles.len() == 2 * shared + self.boundary.len()
    }

    /// Euler characteristic of the tiled disk: V − E + F = 1 with the outer
    /// face excluded. Tiling vertices are counted by walking tile corners
    /// and identifying them through shared edges.
    pub fn euler_consistent(&self) -> bool {
        // Corner (t, k) sits between slots k and (k+1) mod 5 of tile t.
        // Two corners coincide when connected through a shared edge: corner
        // (t, k) is, across the edge at slot k, the corner of the partner
        // just counterclockwise of the partner slot.
        let mut parent: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        let find = |parent: &mut BTreeMap<(usize, usize), (usize, usize)>,
                    mut x: (usize, usize)|
         -> (usize, usize) {
            while let Some(&p) = parent.get(&x) {
                if p == x {
                    break;
                }
                x = p;
            }
            x
        };
        let union = |parent: &mut BTreeMap<(usize, usize), (usize, usize)>,
                         a: (usize, usize),
                         b: (usize, usize)| {
            let ra = find(parent, a);
            let rb = find(parent, b);
            parent.entry(ra).or_insert(ra);
            parent.entry(rb).or_insert(rb);
            if ra != rb {
                let v = find(parent, ra);
                parent.insert(v, rb);
            }
        };
        for t in 0..self.tiles.len() {
            for k in 0..5 {
                parent.entry((t, k)).or_insert((t, k));
            }
        }
        for t in 0..self.tiles.len() {
            for s in 0..5 {
                if let Slot::Bulk(u, su) = self.tiles[t].slots[s] {
                    // Corner after slot s of t equals corner before slot su
                    // of u, and vice versa.
                    union(&mut parent, (t, s), (u, (su + 4) % 5));
                    union(&mut parent, (t, (s + 4) % 5), (u, su));
                }
            }
        }
        let mut roots: BTreeSet<(usize, usize)> = BTreeSet::new();
        for t in 0..self.tiles.len() {
            for k in 0..5 {
                roots.insert(find(&mut parent, (t, k)));
            }
        }
        let v = roots.len();
        let e = self.bulk_edges().len() + self.boundary.len();
        let f = self.tiles.len();
        v + f == e + 1
    }

    /// Dual graph with dangling edges: tiles are GC vertices 0..T, boundary
    /// legs are NGC vertices T..T+B (in cyclic order), with the planar
    /// embedding recorded as the per-tile slot order.
    pub fn dual_graph(&self) -> LabeledGraph {
        let t_count = self.tiles.len() as u32;
        let mut vertices: Vec<(u32, u8)> =
            (0..t_count).map(|t| (t, 1u8)).collect();
        for b in 0..self.boundary.len() as u32 {
            vertices.push((t_count + b, 0));
        }
        let mut edges: Vec<(u32, u32)> = Vec::new();
        for (a, _, b, _) in self.bulk_edges() {
            edges.push((a as u32, b as u32));
        }
        for (bi, &(t, _)) in self.boundary.iter().enumerate() {
            edges.push((t_count + bi as u32, t as u32));
        }
        let mut cyclic_order: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
        for (ti, tile) in self.tiles.iter().enumerate() {
            let mut ring = Vec::new();
            for slot in tile.slots.iter() {
                match *slot {
                    Slot::Bulk(u, _) => {
                        let (a, b) = (ti as u32, u as u32);
                        ring.push(if a < b { (a, b) } else { (b, a) });
                    }
                    Slot::Boundary(bi) => {
                        ring.push((t_count + bi as u32, ti as u32));
                    }
                    Slot::Open => panic!("open slot after generation"),
                }
            }
            cyclic_order.insert(ti as u32, ring);
        }
        let mut boundary_set: BTreeSet<u32> = BTreeSet::new();
        for b in 0..self.boundary.len() as u32 {
            boundary_set.insert(t_count + b);
        }
        // Tiles with a dangling leg sit on the outer face.
        for (ti, tile) in self.tiles.iter().enumerate() {
            if tile
                .slots
                .iter()
                .any(|s| matches!(s, Slot::Boundary(_)))
            {
                boundary_set.insert(ti as u32);
            }
        }
        // Normalize edge orientation: bulk edges ascend; dangling edges
        // point from the boundary (NGC) vertex into the bulk, which the
        // construction above already guarantees.
        LabeledGraph::new(
            &vertices,
            &edges,
            Some(PlanarEmbedding {
                cyclic_order,
                boundary: boundary_set,
            }),
        )
        .expect("tiling dual graph is well formed")
    }
}
