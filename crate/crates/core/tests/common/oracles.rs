//! Brute-force reference implementations checked against the library.

use std::collections::{HashSet, VecDeque};

/// Text between every `open` and the following `close`.
pub fn between<'a>(text: &'a str, open: &str, close: &str) -> Vec<&'a str> {
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(i) = rest.find(open) {
        let after = &rest[i + open.len()..];
        let j = after.find(close).unwrap();
        out.push(&after[..j]);
        rest = &after[j + close.len()..];
    }
    out
}

/// Counts sentences and tokens straight from the fixture markup.
pub fn count_by_hand(html: &str) -> (usize, usize) {
    let mut sentences: Vec<String> = Vec::new();
    for list in between(html, "<ul class=\"recommendations\">", "</ul>") {
        for item in between(list, "<li>", "</li>") {
            let mut words: Vec<&str> = item.split_whitespace().collect();
            words.remove(0);
            if matches!(words.last(), Some(&("A" | "B" | "C" | "E"))) {
                words.pop();
            }
            sentences.push(words.join(" "));
        }
    }
    for div in between(html, "<div class=\"discussion\">", "</div>") {
        for para in between(div, "<p>", "</p>") {
            let mut start = 0;
            let bytes = para.as_bytes();
            for i in 0..bytes.len() {
                let end_mark = matches!(bytes[i], b'.' | b'?' | b'!');
                if end_mark && i + 2 < bytes.len() && bytes[i + 1] == b' ' && bytes[i + 2].is_ascii_uppercase() {
                    sentences.push(para[start..=i].to_string());
                    start = i + 2;
                }
            }
            sentences.push(para[start..].to_string());
        }
    }
    let tokens = sentences
        .iter()
        .map(|s| {
            // a period between digits belongs to the number
            let chars: Vec<char> = s.to_lowercase().chars().collect();
            let joined: String = chars
                .iter()
                .enumerate()
                .filter(|&(i, &c)| {
                    !(c == '.' && i > 0 && chars[i - 1].is_ascii_digit() && chars.get(i + 1).is_some_and(char::is_ascii_digit))
                })
                .map(|(_, &c)| c)
                .collect();
            joined
                .split(|c: char| !c.is_ascii_alphanumeric())
                .filter(|w| !w.is_empty())
                .count()
        })
        .sum();
    (sentences.len(), tokens)
}

pub fn precision_at(ranking: &[String], relevant: &HashSet<String>, k: usize) -> f64 {
    let hits = ranking.iter().take(k).filter(|r| relevant.contains(*r)).count();
    hits as f64 / k as f64
}

pub fn recall_at(ranking: &[String], relevant: &HashSet<String>, k: usize) -> f64 {
    let hits = ranking.iter().take(k).filter(|r| relevant.contains(*r)).count();
    hits as f64 / relevant.len() as f64
}

pub fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

pub fn average_precision(ranking: &[String], relevant: &HashSet<String>) -> f64 {
    let mut sum = 0.0;
    for (i, r) in ranking.iter().enumerate() {
        if relevant.contains(r) {
            sum += precision_at(ranking, relevant, i + 1);
        }
    }
    sum / relevant.len() as f64
}

/// All-pairs hop counts by one BFS per source over the undirected view.
pub fn bfs_hops(n: usize, edges: &[(usize, usize, bool)]) -> Vec<Vec<Option<u32>>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b, _) in edges {
        if a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    (0..n)
        .map(|src| {
            let mut dist = vec![None; n];
            dist[src] = Some(0);
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                let d = dist[u].unwrap();
                for &v in &adj[u] {
                    if dist[v].is_none() {
                        dist[v] = Some(d + 1);
                        queue.push_back(v);
                    }
                }
            }
            dist
        })
        .collect()
}

/// `up[i][j]`: a directed isa path of length >= 1 goes from i to j.
pub fn isa_closure(n: usize, edges: &[(usize, usize, bool)]) -> Vec<Vec<bool>> {
    let mut up = vec![vec![false; n]; n];
    for &(a, b, isa) in edges {
        if isa && a != b {
            up[a][b] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if up[i][k] {
                for j in 0..n {
                    if up[k][j] {
                        up[i][j] = true;
                    }
                }
            }
        }
    }
    up
}
