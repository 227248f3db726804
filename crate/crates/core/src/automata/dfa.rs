use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Widest alphabet the builders accept: `2^MAX_WIDTH` symbols.
pub const MAX_WIDTH: usize = 16;

/// A symbol is a bit vector with bit `i` for track `i`.
pub type BitSymbol = u32;

/// One machine of the construction, over track indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Machine {
    /// `p = q + r`
    Sum { p: usize, q: usize, r: usize },
    /// `p = q + r` with `q`, `r` disjoint; both nonempty when `nonempty`.
    DisjointSum { p: usize, q: usize, r: usize, nonempty: bool },
    /// `x = h(y)`
    Hom { x: usize, y: usize },
    /// `x = h(y)` with `y` a single position; with `optional` the all-zero
    /// pair is accepted as well.
    AsymHom { x: usize, y: usize, optional: bool },
    /// `x` is the constant itself.
    Const { x: usize },
    Zero { x: usize },
    NonZero { x: usize },
    Eq { x: usize, y: usize },
}

impl Machine {
    fn initial(self) -> u8 {
        0
    }

    fn step(self, state: u8, sym: BitSymbol) -> Option<u8> {
        let bit = |t: usize| (sym >> t & 1) as u8;
        match self {
            Machine::Sum { p, q, r } => (bit(p) == bit(q) ^ bit(r)).then_some(0),
            Machine::DisjointSum { p, q, r, .. } => {
                let (bq, br) = (bit(q), bit(r));
                (bit(p) == bq ^ br && bq & br == 0).then_some(state | bq | br << 1)
            }
            Machine::Hom { x, y } => (bit(x) == state).then_some(bit(y)),
            Machine::AsymHom { x, y, .. } => match (state, bit(y), bit(x)) {
                (0, 0, 0) => Some(0),
                (0, 1, 0) => Some(1),
                (1, 0, 1) => Some(2),
                (2, 0, 0) => Some(2),
                _ => None,
            },
            Machine::Const { x } => match (state, bit(x)) {
                (0, 1) | (1, 0) => Some(1),
                _ => None,
            },
            Machine::Zero { x } => (bit(x) == 0).then_some(0),
            Machine::NonZero { x } => Some(state | bit(x)),
            Machine::Eq { x, y } => (bit(x) == bit(y)).then_some(0),
        }
    }

    fn accepting(self, state: u8) -> bool {
        match self {
            Machine::Sum { .. } | Machine::Zero { .. } | Machine::Eq { .. } => true,
            Machine::DisjointSum { nonempty, .. } => !nonempty || state == 3,
            Machine::Hom { .. } => state == 0,
            Machine::AsymHom { optional, .. } => state == 2 || (optional && state == 0),
            Machine::Const { .. } | Machine::NonZero { .. } => state == 1,
        }
    }

    /// Direct evaluation on per-track values, `bit j` of a value standing
    /// for `h^j` of the constant.
    pub fn holds(self, values: &[u64]) -> bool {
        match self {
            Machine::Sum { p, q, r } => values[p] == values[q] ^ values[r],
            Machine::DisjointSum { p, q, r, nonempty } => {
                values[p] == values[q] ^ values[r]
                    && values[q] & values[r] == 0
                    && (!nonempty || (values[q] != 0 && values[r] != 0))
            }
            Machine::Hom { x, y } => values[y] >> 63 == 0 && values[x] == values[y] << 1,
            Machine::AsymHom { x, y, optional } => {
                (optional && values[x] == 0 && values[y] == 0)
                    || (values[y].count_ones() == 1 && values[y] >> 63 == 0 && values[x] == values[y] << 1)
            }
            Machine::Const { x } => values[x] == 1,
            Machine::Zero { x } => values[x] == 0,
            Machine::NonZero { x } => values[x] != 0,
            Machine::Eq { x, y } => values[x] == values[y],
        }
    }
}

/// Complete deterministic automaton over `2^width` symbols. The dead state
/// is the last state and is never accepting.
#[derive(Clone, PartialEq, Eq)]
pub struct EqAutomaton {
    pub width: usize,
    pub initial: usize,
    pub accepting: Vec<bool>,
    pub dead: usize,
    table: Vec<u32>,
}

impl EqAutomaton {
    pub fn build(machine: Machine, width: usize) -> Result<Self> {
        check_width(width)?;
        let symbols = 1usize << width;
        let mut ids: HashMap<u8, usize> = HashMap::new();
        let mut states = vec![machine.initial()];
        ids.insert(machine.initial(), 0);
        let mut rows: Vec<Vec<Option<usize>>> = Vec::new();
        let mut k = 0;
        while k < states.len() {
            let s = states[k];
            let mut row = Vec::with_capacity(symbols);
            for sym in 0..symbols {
                row.push(machine.step(s, sym as BitSymbol).map(|t| {
                    *ids.entry(t).or_insert_with(|| {
                        states.push(t);
                        states.len() - 1
                    })
                }));
            }
            rows.push(row);
            k += 1;
        }
        let dead = states.len();
        let mut table = Vec::with_capacity((dead + 1) * symbols);
        for row in rows {
            table.extend(row.into_iter().map(|t| t.unwrap_or(dead) as u32));
        }
        table.extend(std::iter::repeat_n(dead as u32, symbols));
        let mut accepting: Vec<bool> = states.iter().map(|&s| machine.accepting(s)).collect();
        accepting.push(false);
        Ok(EqAutomaton {
            width,
            initial: 0,
            accepting,
            dead,
            table,
        })
    }

    pub fn states(&self) -> usize {
        self.accepting.len()
    }

    pub fn next(&self, state: usize, sym: BitSymbol) -> usize {
        self.table[(state << self.width) + sym as usize] as usize
    }

    pub fn is_total(&self) -> bool {
        self.table.len() == self.states() << self.width && self.table.iter().all(|&t| (t as usize) < self.states())
    }

    pub fn accepts(&self, word: &[BitSymbol]) -> bool {
        let end = word.iter().fold(self.initial, |s, &a| self.next(s, a));
        self.accepting[end]
    }
}

impl fmt::Debug for EqAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EqAutomaton")
            .field("width", &self.width)
            .field("states", &self.states())
            .field("accepting", &self.accepting)
            .finish()
    }
}

pub(crate) fn check_width(width: usize) -> Result<()> {
    if width > MAX_WIDTH {
        return Err(Error::CapExceeded(format!(
            "{width} tracks exceed the automaton width limit of {MAX_WIDTH}"
        )));
    }
    Ok(())
}

/// Accepted word; trailing all-zero symbols are stripped.
pub type Witness = Vec<BitSymbol>;

pub fn strip(mut w: Witness) -> Witness {
    while w.last() == Some(&0) {
        w.pop();
    }
    w
}

/// Product node: component states, relevant-track mask, parent link.
type ProductNode = (Vec<usize>, u64, Option<(usize, BitSymbol)>);

/// Breadth-first search of the product. Every reachable accepting product
/// state is reported together with the set of `relevant` tracks that carried
/// a 1 on the way; the first word found for each such set is shortest.
pub fn explore_product(automata: &[EqAutomaton], width: usize, relevant: u64) -> Vec<(u64, Witness)> {
    let symbols = 1u32 << width;
    let start: Vec<usize> = automata.iter().map(|a| a.initial).collect();
    let mut index: HashMap<(Vec<usize>, u64), usize> = HashMap::new();
    let mut nodes: Vec<ProductNode> = vec![(start.clone(), 0, None)];
    index.insert((start, 0), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut found: Vec<(u64, Witness)> = Vec::new();
    let mut seen_masks: HashSet<u64> = HashSet::new();
    while let Some(n) = queue.pop_front() {
        let (states, mask, _) = nodes[n].clone();
        if automata.iter().zip(&states).all(|(a, &s)| a.accepting[s]) && seen_masks.insert(mask) {
            let mut word = Vec::new();
            let mut cur = n;
            while let Some((parent, sym)) = nodes[cur].2 {
                word.push(sym);
                cur = parent;
            }
            word.reverse();
            found.push((mask, strip(word)));
        }
        'sym: for sym in 0..symbols {
            let mut next = Vec::with_capacity(automata.len());
            for (a, &s) in automata.iter().zip(&states) {
                let t = a.next(s, sym);
                if t == a.dead {
                    continue 'sym;
                }
                next.push(t);
            }
            let key = (next, mask | (sym as u64 & relevant));
            if !index.contains_key(&key) {
                index.insert(key.clone(), nodes.len());
                nodes.push((key.0, key.1, Some((n, sym))));
                queue.push_back(nodes.len() - 1);
            }
        }
    }
    found
}

/// Shortest word accepted by every automaton, if any.
pub fn intersect_and_check(automata: &[EqAutomaton]) -> Option<Witness> {
    let width = automata.first().map_or(0, |a| a.width);
    assert!(automata.iter().all(|a| a.width == width), "automata disagree on width");
    let symbols = 1u32 << width;
    let start: Vec<usize> = automata.iter().map(|a| a.initial).collect();
    let mut parent: HashMap<Vec<usize>, Option<(Vec<usize>, BitSymbol)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(states) = queue.pop_front() {
        if automata.iter().zip(&states).all(|(a, &s)| a.accepting[s]) {
            let mut word = Vec::new();
            let mut cur = states;
            while let Some(Some((prev, sym))) = parent.get(&cur).cloned() {
                word.push(sym);
                cur = prev;
            }
            word.reverse();
            return Some(strip(word));
        }
        'sym: for sym in 0..symbols {
            let mut next = Vec::with_capacity(automata.len());
            for (a, &s) in automata.iter().zip(&states) {
                let t = a.next(s, sym);
                if t == a.dead {
                    continue 'sym;
                }
                next.push(t);
            }
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((states.clone(), sym)));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Per-track values of a word: bit `j` of track `i` is bit `i` of symbol `j`.
pub fn track_values(word: &[BitSymbol], width: usize) -> Vec<u64> {
    let mut out = vec![0u64; width];
    for (j, &sym) in word.iter().enumerate() {
        for (i, v) in out.iter_mut().enumerate() {
            if sym >> i & 1 == 1 {
                *v |= 1 << j;
            }
        }
    }
    out
}

/// Inverse of [`track_values`], without trailing zero symbols.
pub fn encode(values: &[u64]) -> Witness {
    let len = values.iter().map(|v| 64 - v.leading_zeros() as usize).max().unwrap_or(0);
    (0..len)
        .map(|j| {
            values
                .iter()
                .enumerate()
                .fold(0, |acc, (i, v)| acc | ((v >> j & 1) as BitSymbol) << i)
        })
        .collect()
}
