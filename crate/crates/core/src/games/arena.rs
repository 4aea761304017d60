use std::collections::VecDeque;

use super::Player;

/// Game graph with owners and colours. Successor lists are ordered and may
/// repeat targets; a position in the list is a move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arena {
    owner: Vec<Player>,
    color: Vec<u32>,
    succ: Vec<Vec<u32>>,
    label: Vec<String>,
    pred: Vec<Vec<u32>>,
}

/// Winning regions and positional strategies. `choice[v]` is a move index
/// into the successor list of `v` and is set exactly when `v` is owned by
/// the player winning it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    winner: Vec<Player>,
    choice: Vec<Option<u32>>,
}

impl Solution {
    pub fn winner(&self, v: u32) -> Player {
        self.winner[v as usize]
    }

    pub fn wins(&self, p: Player, v: u32) -> bool {
        self.winner[v as usize] == p
    }

    /// Move prescribed at `v`, if its owner wins it.
    pub fn choice(&self, v: u32) -> Option<u32> {
        self.choice[v as usize]
    }

    pub fn region(&self, p: Player) -> Vec<u32> {
        (0..self.winner.len() as u32).filter(|&v| self.wins(p, v)).collect()
    }

    pub fn len(&self) -> usize {
        self.winner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.winner.is_empty()
    }
}

impl Arena {
    /// Panics unless every node has at least one successor and all targets exist.
    pub fn new(owner: Vec<Player>, color: Vec<u32>, succ: Vec<Vec<u32>>, label: Vec<String>) -> Self {
        let n = owner.len();
        assert!(color.len() == n && succ.len() == n && label.len() == n, "per-node vectors differ in length");
        let mut pred = vec![Vec::new(); n];
        for (v, s) in succ.iter().enumerate() {
            assert!(!s.is_empty(), "node {v} has no successor");
            for &w in s {
                assert!((w as usize) < n, "successor {w} of node {v} out of range");
                pred[w as usize].push(v as u32);
            }
        }
        Arena { owner, color, succ, label, pred }
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn owner(&self, v: u32) -> Player {
        self.owner[v as usize]
    }

    pub fn color(&self, v: u32) -> u32 {
        self.color[v as usize]
    }

    pub fn succ(&self, v: u32) -> &[u32] {
        &self.succ[v as usize]
    }

    pub fn label(&self, v: u32) -> &str {
        &self.label[v as usize]
    }

    pub fn max_color(&self) -> u32 {
        self.color.iter().copied().max().unwrap_or(0)
    }

    /// Zielonka's recursive algorithm, max-even parity.
    pub fn solve(&self) -> Solution {
        let mut choice = vec![None; self.len()];
        let all = vec![true; self.len()];
        let won = self.zielonka(all, &mut choice);
        self.finish(won, choice)
    }

    /// Safety reading of the colours: P0 loses exactly the plays that visit
    /// a nonzero colour. Linear in the number of moves.
    pub fn solve_safety(&self) -> Solution {
        let n = self.len();
        let mut choice = vec![None; n];
        let all = vec![true; n];
        let bad: Vec<bool> = self.color.iter().map(|&c| c != 0).collect();
        let lose = self.attractor(&all, &bad, Player::P1, &mut choice);
        for v in 0..n {
            if lose[v] && bad[v] && self.owner[v] == Player::P1 {
                choice[v] = Some(0);
            }
            if !lose[v] && self.owner[v] == Player::P0 {
                choice[v] = self.first_into(v, &lose, false);
            }
        }
        let won = [lose.iter().map(|&l| !l).collect(), lose];
        self.finish(won, choice)
    }

    fn finish(&self, won: [Vec<bool>; 2], mut choice: Vec<Option<u32>>) -> Solution {
        let winner: Vec<Player> = (0..self.len())
            .map(|v| {
                debug_assert!(won[0][v] != won[1][v], "regions must partition the arena");
                if won[0][v] {
                    Player::P0
                } else {
                    Player::P1
                }
            })
            .collect();
        for v in 0..self.len() {
            if winner[v] != self.owner[v] {
                choice[v] = None;
            }
        }
        Solution { winner, choice }
    }

    /// Smallest move of `v` whose target has `set[target] == want`.
    fn first_into(&self, v: usize, set: &[bool], want: bool) -> Option<u32> {
        self.succ[v].iter().position(|&w| set[w as usize] == want).map(|i| i as u32)
    }

    /// Nodes of `game` from which `p` forces a visit to `target`. Records
    /// attracting moves for `p`'s nodes outside the target.
    fn attractor(&self, game: &[bool], target: &[bool], p: Player, choice: &mut [Option<u32>]) -> Vec<bool> {
        let n = self.len();
        let mut attr = vec![false; n];
        let mut queue = VecDeque::new();
        for v in 0..n {
            if game[v] && target[v] {
                attr[v] = true;
                queue.push_back(v);
            }
        }
        let mut remaining: Vec<u32> = (0..n)
            .map(|v| {
                if game[v] && self.owner[v] != p {
                    self.succ[v].iter().filter(|&&w| game[w as usize]).count() as u32
                } else {
                    0
                }
            })
            .collect();
        while let Some(w) = queue.pop_front() {
            for &u in &self.pred[w] {
                let u = u as usize;
                if !game[u] || attr[u] {
                    continue;
                }
                if self.owner[u] == p {
                    attr[u] = true;
                    choice[u] = self.first_into(u, &attr, true);
                    queue.push_back(u);
                } else {
                    remaining[u] -= 1;
                    if remaining[u] == 0 {
                        attr[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        attr
    }

    // Recursion depth is bounded by the number of colours: the loop replaces
    // the second recursive call of the textbook formulation.
    fn zielonka(&self, mut game: Vec<bool>, choice: &mut [Option<u32>]) -> [Vec<bool>; 2] {
        let n = self.len();
        let mut won = [vec![false; n], vec![false; n]];
        loop {
            let Some(d) = (0..n).filter(|&v| game[v]).map(|v| self.color[v]).max() else {
                return won;
            };
            let p = Player::of_color(d);
            let q = p.opponent();
            let top: Vec<bool> = (0..n).map(|v| game[v] && self.color[v] == d).collect();
            let a = self.attractor(&game, &top, p, choice);
            for v in 0..n {
                if top[v] && self.owner[v] == p {
                    choice[v] = self.first_into(v, &game, true);
                }
            }
            let rest: Vec<bool> = (0..n).map(|v| game[v] && !a[v]).collect();
            let sub = self.zielonka(rest, choice);
            if !sub[q.index()].iter().any(|&x| x) {
                for v in 0..n {
                    if game[v] {
                        won[p.index()][v] = true;
                    }
                }
                return won;
            }
            let b = self.attractor(&game, &sub[q.index()], q, choice);
            for v in 0..n {
                if b[v] {
                    won[q.index()][v] = true;
                    game[v] = false;
                }
            }
        }
    }
}
