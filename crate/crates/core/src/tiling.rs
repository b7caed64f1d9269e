//! Parallelogram tilings of the polygon between the multiplicity graphs
//! of sigma and eta. Each reduced word builds one tiling tile by tile;
//! withdrawing exposed tiles from the top recovers a reduced word in
//! the same commutation class.

use serde::{Deserialize, Serialize};

use crate::coxeter::{Permutation, ReducedWord};
use crate::error::{Error, Result};

/// One parallelogram, crossed by the vertical line x = col. The four
/// corners are (col-1, y_left), (col, y_low), (col+1, y_right),
/// (col, y_high).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Tile {
    pub col: usize,
    pub y_left: i64,
    pub y_low: i64,
    pub y_high: i64,
    pub y_right: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Tiling {
    pub sigma: Permutation,
    pub tiles: Vec<Tile>,
    pub word: ReducedWord,
}

/// Top boundary graph of sigma: k -> 2 mult_k(sigma) - mult_k(eta),
/// padded with zeros at k = 0 and k = n+1.
fn top_graph(sigma: &Permutation) -> Vec<i64> {
    let n = sigma.rank();
    let mult = sigma.mult_vector();
    let mut y = vec![0i64; n + 2];
    for k in 1..=n {
        let eta_k = (k * (n + 1 - k)) as i64;
        y[k] = 2 * mult.entries()[k - 1] - eta_k;
    }
    y
}

/// Bottom boundary graph: k -> -mult_k(eta).
fn bottom_graph(n: usize) -> Vec<i64> {
    let mut y = vec![0i64; n + 2];
    for k in 1..=n {
        y[k] = -((k * (n + 1 - k)) as i64);
    }
    y
}

/// Builds the tiling encoded by a reduced word: letters are consumed
/// from the right, each stacking one tile on the growing polygon.
pub fn elnitsky_tiling(word: &ReducedWord, n: usize) -> Result<Tiling> {
    if !word.is_reduced(n)? {
        return Err(Error::NotReduced);
    }
    let sigma = word.evaluate(n)?;
    let mut tiles: Vec<Tile> = Vec::with_capacity(word.len());
    let mut cur = Permutation::identity(n);
    let mut y = top_graph(&cur);
    for &i in word.letters().iter().rev() {
        // stacking a_i on top of cur: values at positions i, i+1 swap
        let delta = cur.image(i + 1) as i64 - cur.image(i) as i64;
        debug_assert!(delta > 0, "reduced word stacks upward");
        tiles.push(Tile {
            col: i,
            y_left: y[i - 1],
            y_low: y[i],
            y_high: y[i] + 2 * delta,
            y_right: y[i + 1],
        });
        y[i] += 2 * delta;
        cur = cur.left_mul_gen(i)?;
    }
    debug_assert_eq!(cur, sigma);
    debug_assert_eq!(y, top_graph(&sigma));
    Ok(Tiling {
        sigma,
        tiles,
        word: word.clone(),
    })
}

/// Withdraws exposed tiles from the top, leftmost first, producing a
/// reduced word for the tiling's permutation.
pub fn tiling_to_word(t: &Tiling) -> Result<ReducedWord> {
    let mut y = top_graph(&t.sigma);
    let mut used = vec![false; t.tiles.len()];
    let mut letters = Vec::with_capacity(t.tiles.len());
    for _ in 0..t.tiles.len() {
        let pick = t
            .tiles
            .iter()
            .enumerate()
            .filter(|(idx, tile)| {
                !used[*idx]
                    && y[tile.col - 1] == tile.y_left
                    && y[tile.col] == tile.y_high
                    && y[tile.col + 1] == tile.y_right
            })
            .min_by_key(|(_, tile)| tile.col);
        let Some((idx, tile)) = pick else {
            return Err(Error::Invalid("no exposed tile; not a tiling".into()));
        };
        used[idx] = true;
        y[tile.col] = tile.y_low;
        letters.push(tile.col);
    }
    Ok(ReducedWord::new(letters))
}

/// Deterministic SVG rendering: columns k at x = k, the polygon between
/// the two multiplicity graphs, tiles filled by column parity. All
/// coordinates are integers (y flipped for screen orientation), so the
/// bytes are stable.
pub fn tiling_svg(t: &Tiling) -> String {
    let n = t.sigma.rank();
    let m = ((n + 1) * (n + 1) / 4) as i64; // max of mult(eta)
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1 {} {} {}\">\n",
        -m - 1,
        n + 3,
        2 * m + 2
    ));
    // region boundary: top graph left to right, bottom graph back
    let top = top_graph(&t.sigma);
    let bot = bottom_graph(n);
    let mut pts = String::new();
    for (k, yv) in top.iter().enumerate() {
        pts.push_str(&format!("{},{} ", k, -yv));
    }
    for (k, yv) in bot.iter().enumerate().rev() {
        pts.push_str(&format!("{},{} ", k, -yv));
    }
    s.push_str(&format!(
        "<polygon points=\"{}\" fill=\"#f7f7f7\" stroke=\"#aaaaaa\" stroke-width=\"0.06\"/>\n",
        pts.trim_end()
    ));
    for tile in &t.tiles {
        let fill = if tile.col % 2 == 1 { "#c6dbef" } else { "#fdd0a2" };
        s.push_str(&format!(
            "<polygon points=\"{},{} {},{} {},{} {},{}\" fill=\"{}\" stroke=\"#333333\" stroke-width=\"0.06\"/>\n",
            tile.col - 1,
            -tile.y_left,
            tile.col,
            -tile.y_low,
            tile.col + 1,
            -tile.y_right,
            tile.col,
            -tile.y_high,
            fill
        ));
    }
    s.push_str("</svg>\n");
    s
}

/// Plain-text rendering: one line per tile in stacking order.
pub fn tiling_ascii(t: &Tiling) -> String {
    let mut s = format!("tiling of {} with {} tiles\n", t.sigma, t.tiles.len());
    for tile in &t.tiles {
        s.push_str(&format!(
            "col {}: y {}..{} (left {}, right {})\n",
            tile.col, tile.y_low, tile.y_high, tile.y_left, tile.y_right
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::parse_permutation;

    #[test]
    fn empty_word_empty_tiling() {
        let t = elnitsky_tiling(&ReducedWord::new(vec![]), 3).unwrap();
        assert!(t.tiles.is_empty());
        assert!(t.sigma.is_identity());
        assert!(tiling_to_word(&t).unwrap().is_empty());
    }

    #[test]
    fn non_reduced_rejected() {
        assert!(matches!(
            elnitsky_tiling(&ReducedWord::new(vec![1, 1]), 2),
            Err(Error::NotReduced)
        ));
    }

    #[test]
    fn tile_count_is_inversion_count() {
        for sigma in Permutation::all(3) {
            let w = sigma.canonical_reduced_word();
            let t = elnitsky_tiling(&w, 3).unwrap();
            assert_eq!(t.tiles.len(), sigma.inv());
        }
    }

    #[test]
    fn withdrawal_reproduces_a_reduced_word() {
        for sigma in Permutation::all(3) {
            let w = sigma.canonical_reduced_word();
            let t = elnitsky_tiling(&w, 3).unwrap();
            let back = tiling_to_word(&t).unwrap();
            assert_eq!(back.len(), sigma.inv());
            assert_eq!(back.evaluate(3).unwrap(), sigma, "sigma = {sigma}");
            assert!(back.is_reduced(3).unwrap());
        }
    }

    #[test]
    fn random_words_round_trip() {
        // 500 random reduced words, ranks up to 5
        let mut state = 0x853c49e6748fea9bu64;
        let mut next = move |m: usize| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 33) as usize % m
        };
        for trial in 0..500 {
            let n = 2 + next(4); // 2..=5
            // random permutation by random right multiplications
            let mut sigma = Permutation::identity(n);
            for _ in 0..next(12) {
                sigma = sigma.right_mul_gen(1 + next(n)).unwrap();
            }
            let w = sigma.canonical_reduced_word();
            let t = elnitsky_tiling(&w, n).unwrap();
            let back = tiling_to_word(&t).unwrap();
            assert_eq!(
                back.evaluate(n).unwrap(),
                w.evaluate(n).unwrap(),
                "trial {trial}"
            );
        }
    }

    #[test]
    fn fig_sized_example() {
        let w = ReducedWord::new(vec![1, 3, 4, 5, 4, 3, 2, 1, 6, 5, 7, 6, 5, 4, 3, 8, 7, 6, 5]);
        let t = elnitsky_tiling(&w, 8).unwrap();
        assert_eq!(t.tiles.len(), 19);
        assert_eq!(t.sigma, parse_permutation("429681735").unwrap());
        let svg = tiling_svg(&t);
        assert_eq!(svg.matches("<polygon").count(), 20); // region + 19 tiles
        // byte stability: regeneration is identical
        let svg2 = tiling_svg(&elnitsky_tiling(&w, 8).unwrap());
        assert_eq!(svg, svg2);
    }
}
