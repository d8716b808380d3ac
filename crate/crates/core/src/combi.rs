//! Small enumeration helpers: combinations and set partitions.

/// All `r`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r <= n {
        rec(0, n, r, &mut Vec::with_capacity(r), &mut out);
    }
    out
}

/// All partitions of `0..n` into exactly `blocks` nonempty unlabeled blocks,
/// as restricted growth strings (`label[0] = 0`, each new label one past the max so far).
pub fn set_partitions(n: usize, blocks: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        if blocks == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    if blocks == 0 || blocks > n {
        return out;
    }
    let mut labels = vec![0usize; n];
    fn rec(i: usize, max: usize, blocks: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = labels.len();
        if i == n {
            if max + 1 == blocks {
                out.push(labels.clone());
            }
            return;
        }
        // Not enough positions left to open the remaining blocks.
        if blocks - (max + 1) > n - i {
            return;
        }
        for l in 0..=(max + 1).min(blocks - 1) {
            labels[i] = l;
            rec(i + 1, max.max(l), blocks, labels, out);
        }
    }
    rec(1, 0, blocks, &mut labels, &mut out);
    out
}

/// Converts a restricted growth string over `items` into explicit blocks.
pub fn blocks_of<T: Clone>(items: &[T], labels: &[usize]) -> Vec<Vec<T>> {
    let nb = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); nb];
    for (x, &l) in items.iter().zip(labels) {
        out[l].push(x.clone());
    }
    out
}
