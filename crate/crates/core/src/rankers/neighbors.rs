//! Neighborhood scorers: user-based RUCF and its item-based mirror RICF.
//!
//! Similarity between two users is the Jaccard index of their explanation
//! sets; a triple (u, i, e) is scored by summing the similarities of u's
//! positive-similarity neighbors who interacted with both i and e. The
//! neighbor pool is uncapped. RICF swaps the roles of users and items.

use crate::dataset::Triplet;
use crate::error::{Error, Result};
use crate::eval::Scorer;

/// The six adjacency families a training split induces, as sorted, deduped
/// index lists. Mutually consistent: `u ∈ users_of_item[i]` iff
/// `i ∈ items_of_user[u]`.
#[derive(Debug, Clone)]
pub struct NeighborIndex {
    exps_of_user: Vec<Vec<u32>>,
    exps_of_item: Vec<Vec<u32>>,
    users_of_item: Vec<Vec<u32>>,
    users_of_exp: Vec<Vec<u32>>,
    items_of_user: Vec<Vec<u32>>,
    items_of_exp: Vec<Vec<u32>>,
}

impl NeighborIndex {
    /// Build from training triplets over vocabularies of the given sizes.
    pub fn from_triplets(
        train: &[Triplet],
        n_users: usize,
        n_items: usize,
        n_explanations: usize,
    ) -> Result<Self> {
        let mut index = NeighborIndex {
            exps_of_user: vec![Vec::new(); n_users],
            exps_of_item: vec![Vec::new(); n_items],
            users_of_item: vec![Vec::new(); n_items],
            users_of_exp: vec![Vec::new(); n_explanations],
            items_of_user: vec![Vec::new(); n_users],
            items_of_exp: vec![Vec::new(); n_explanations],
        };
        for t in train {
            if t.user as usize >= n_users {
                return Err(Error::UnknownEntity {
                    kind: "user",
                    id: t.user.to_string(),
                });
            }
            if t.item as usize >= n_items {
                return Err(Error::UnknownEntity {
                    kind: "item",
                    id: t.item.to_string(),
                });
            }
            if t.explanation as usize >= n_explanations {
                return Err(Error::UnknownEntity {
                    kind: "explanation",
                    id: t.explanation.to_string(),
                });
            }
            index.exps_of_user[t.user as usize].push(t.explanation);
            index.exps_of_item[t.item as usize].push(t.explanation);
            index.users_of_item[t.item as usize].push(t.user);
            index.users_of_exp[t.explanation as usize].push(t.user);
            index.items_of_user[t.user as usize].push(t.item);
            index.items_of_exp[t.explanation as usize].push(t.item);
        }
        for family in [
            &mut index.exps_of_user,
            &mut index.exps_of_item,
            &mut index.users_of_item,
            &mut index.users_of_exp,
            &mut index.items_of_user,
            &mut index.items_of_exp,
        ] {
            for list in family.iter_mut() {
                list.sort_unstable();
                list.dedup();
            }
        }
        Ok(index)
    }

    pub fn n_users(&self) -> usize {
        self.exps_of_user.len()
    }

    pub fn n_items(&self) -> usize {
        self.exps_of_item.len()
    }

    pub fn n_explanations(&self) -> usize {
        self.users_of_exp.len()
    }

    pub fn exps_of_user(&self, u: u32) -> &[u32] {
        &self.exps_of_user[u as usize]
    }

    pub fn exps_of_item(&self, i: u32) -> &[u32] {
        &self.exps_of_item[i as usize]
    }

    pub fn users_of_item(&self, i: u32) -> &[u32] {
        &self.users_of_item[i as usize]
    }

    pub fn users_of_exp(&self, e: u32) -> &[u32] {
        &self.users_of_exp[e as usize]
    }

    pub fn items_of_user(&self, u: u32) -> &[u32] {
        &self.items_of_user[u as usize]
    }

    pub fn items_of_exp(&self, e: u32) -> &[u32] {
        &self.items_of_exp[e as usize]
    }

    fn check_user(&self, u: u32) -> Result<()> {
        if (u as usize) < self.n_users() {
            Ok(())
        } else {
            Err(Error::UnknownEntity {
                kind: "user",
                id: u.to_string(),
            })
        }
    }

    fn check_item(&self, i: u32) -> Result<()> {
        if (i as usize) < self.n_items() {
            Ok(())
        } else {
            Err(Error::UnknownEntity {
                kind: "item",
                id: i.to_string(),
            })
        }
    }

    fn check_exp(&self, e: u32) -> Result<()> {
        if (e as usize) < self.n_explanations() {
            Ok(())
        } else {
            Err(Error::UnknownEntity {
                kind: "explanation",
                id: e.to_string(),
            })
        }
    }
}

/// `|a ∩ b|` for sorted deduped slices.
fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    let (mut ai, mut bi, mut n) = (0, 0, 0);
    while ai < a.len() && bi < b.len() {
        match a[ai].cmp(&b[bi]) {
            std::cmp::Ordering::Less => ai += 1,
            std::cmp::Ordering::Greater => bi += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                ai += 1;
                bi += 1;
            }
        }
    }
    n
}

fn jaccard(a: &[u32], b: &[u32]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let inter = intersection_size(a, b);
    inter as f64 / (a.len() + b.len() - inter) as f64
}

/// Jaccard similarity of two users' explanation sets; 0 when both are empty.
pub fn jaccard_user_sim(u: u32, u2: u32, index: &NeighborIndex) -> Result<f64> {
    index.check_user(u)?;
    index.check_user(u2)?;
    Ok(jaccard(index.exps_of_user(u), index.exps_of_user(u2)))
}

/// Jaccard similarity of two items' explanation sets; 0 when both are empty.
pub fn jaccard_item_sim(i: u32, i2: u32, index: &NeighborIndex) -> Result<f64> {
    index.check_item(i)?;
    index.check_item(i2)?;
    Ok(jaccard(index.exps_of_item(i), index.exps_of_item(i2)))
}

/// RUCF: sum of similarities of u's neighbors (similarity > 0, not u
/// itself) who interacted with both item i and explanation e.
pub fn score_rucf(u: u32, i: u32, e: u32, index: &NeighborIndex) -> Result<f64> {
    index.check_user(u)?;
    index.check_item(i)?;
    index.check_exp(e)?;
    let mine = index.exps_of_user(u);
    let mut score = 0.0;
    // Qualifying neighbors are exactly 𝒰_i ∩ 𝒰_e; walk the two sorted lists.
    let (users_i, users_e) = (index.users_of_item(i), index.users_of_exp(e));
    let (mut ai, mut bi) = (0, 0);
    while ai < users_i.len() && bi < users_e.len() {
        match users_i[ai].cmp(&users_e[bi]) {
            std::cmp::Ordering::Less => ai += 1,
            std::cmp::Ordering::Greater => bi += 1,
            std::cmp::Ordering::Equal => {
                let neighbor = users_i[ai];
                if neighbor != u {
                    score += jaccard(mine, index.exps_of_user(neighbor));
                }
                ai += 1;
                bi += 1;
            }
        }
    }
    Ok(score)
}

/// RICF: the item-side mirror of RUCF — sum of item similarities of i's
/// neighbors that both user u and explanation e interacted with.
pub fn score_ricf(u: u32, i: u32, e: u32, index: &NeighborIndex) -> Result<f64> {
    index.check_user(u)?;
    index.check_item(i)?;
    index.check_exp(e)?;
    let mine = index.exps_of_item(i);
    let mut score = 0.0;
    let (items_u, items_e) = (index.items_of_user(u), index.items_of_exp(e));
    let (mut ai, mut bi) = (0, 0);
    while ai < items_u.len() && bi < items_e.len() {
        match items_u[ai].cmp(&items_e[bi]) {
            std::cmp::Ordering::Less => ai += 1,
            std::cmp::Ordering::Greater => bi += 1,
            std::cmp::Ordering::Equal => {
                let neighbor = items_u[ai];
                if neighbor != i {
                    score += jaccard(mine, index.exps_of_item(neighbor));
                }
                ai += 1;
                bi += 1;
            }
        }
    }
    Ok(score)
}

/// RUCF as a pluggable scorer. `score_candidates` scatters each neighbor's
/// similarity over that neighbor's explanation set once per (u, i) instead
/// of re-deriving the neighbor pool per candidate.
pub struct RucfScorer<'a> {
    pub index: &'a NeighborIndex,
}

impl Scorer for RucfScorer<'_> {
    fn score(&self, u: u32, i: u32, e: u32) -> f64 {
        score_rucf(u, i, e, self.index).expect("evaluation uses in-range indices")
    }

    fn score_candidates(&self, u: u32, i: u32, candidates: &[u32]) -> Vec<f64> {
        let mine = self.index.exps_of_user(u);
        let mut dense = vec![0.0; self.index.n_explanations()];
        for &neighbor in self.index.users_of_item(i) {
            if neighbor == u {
                continue;
            }
            let sim = jaccard(mine, self.index.exps_of_user(neighbor));
            if sim > 0.0 {
                // neighbor ∈ 𝒰_e exactly for the e in its explanation set.
                for &e in self.index.exps_of_user(neighbor) {
                    dense[e as usize] += sim;
                }
            }
        }
        candidates.iter().map(|&e| dense[e as usize]).collect()
    }
}

/// RICF as a pluggable scorer, batched the same way on the item side.
pub struct RicfScorer<'a> {
    pub index: &'a NeighborIndex,
}

impl Scorer for RicfScorer<'_> {
    fn score(&self, u: u32, i: u32, e: u32) -> f64 {
        score_ricf(u, i, e, self.index).expect("evaluation uses in-range indices")
    }

    fn score_candidates(&self, u: u32, i: u32, candidates: &[u32]) -> Vec<f64> {
        let mine = self.index.exps_of_item(i);
        let mut dense = vec![0.0; self.index.n_explanations()];
        for &neighbor in self.index.items_of_user(u) {
            if neighbor == i {
                continue;
            }
            let sim = jaccard(mine, self.index.exps_of_item(neighbor));
            if sim > 0.0 {
                for &e in self.index.exps_of_item(neighbor) {
                    dense[e as usize] += sim;
                }
            }
        }
        candidates.iter().map(|&e| dense[e as usize]).collect()
    }
}
