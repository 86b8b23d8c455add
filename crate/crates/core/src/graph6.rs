//! McKay's graph6 encoding.
//!
//! `N(n) R(x)`: the order followed by the upper triangle of the adjacency
//! matrix, column by column (`(0,1),(0,2),(1,2),(0,3),...`), packed six bits
//! per byte, big-endian, each byte offset by 63.

use crate::graph::{Graph, GraphError};
use thiserror::Error;

const HEADER: &str = ">>graph6<<";
const MAX_ORDER: usize = 68_719_476_735;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("byte {offset}: character {byte:#04x} is not a graph6 character")]
    BadByte { offset: usize, byte: u8 },
    #[error("byte {offset}: input ended inside the size header")]
    TruncatedHeader { offset: usize },
    #[error("byte {offset}: expected {expected} data bytes for order {order}, found {found}")]
    Length {
        offset: usize,
        order: usize,
        expected: usize,
        found: usize,
    },
    #[error("byte {offset}: padding bits are not zero")]
    Padding { offset: usize },
    #[error("order {0} exceeds the graph6 limit")]
    OrderTooLarge(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn encode_order(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
}

/// Encodes `g` without the optional `>>graph6<<` header or trailing newline.
pub fn encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(8 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    encode_order(n, &mut out);
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

fn sextet(bytes: &[u8], offset: usize) -> Result<u64, Graph6Error> {
    match bytes.get(offset) {
        Some(&b) if (63..=126).contains(&b) => Ok((b - 63) as u64),
        Some(&b) => Err(Graph6Error::BadByte { offset, byte: b }),
        None => Err(Graph6Error::TruncatedHeader { offset }),
    }
}

/// Decodes one graph6 line. Accepts an optional `>>graph6<<` prefix and
/// surrounding whitespace. Error offsets count bytes of the trimmed input.
pub fn decode(text: &str) -> Result<Graph, Graph6Error> {
    let text = text.trim();
    let body = text.strip_prefix(HEADER).unwrap_or(text);
    let base = text.len() - body.len();
    let bytes = body.as_bytes();

    let first = sextet(bytes, 0).map_err(|e| shift(e, base))?;
    let (n, mut pos) = if first < 63 {
        (first as usize, 1)
    } else {
        let second = sextet(bytes, 1).map_err(|e| shift(e, base))?;
        if second < 63 {
            let mut n = 0u64;
            for k in 1..4 {
                n = (n << 6) | sextet(bytes, k).map_err(|e| shift(e, base))?;
            }
            (n as usize, 4)
        } else {
            let mut n = 0u64;
            for k in 2..8 {
                n = (n << 6) | sextet(bytes, k).map_err(|e| shift(e, base))?;
            }
            (n as usize, 8)
        }
    };
    if n > MAX_ORDER {
        return Err(Graph6Error::OrderTooLarge(n));
    }
    let mut g = Graph::empty(n)?;
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    let found = bytes.len() - pos;
    if found != expected {
        return Err(Graph6Error::Length {
            offset: base + pos,
            order: n,
            expected,
            found,
        });
    }
    let mut bit = 0usize;
    let mut cur = 0u64;
    let mut left = 0;
    for j in 1..n {
        for i in 0..j {
            if left == 0 {
                cur = sextet(bytes, pos).map_err(|e| shift(e, base))?;
                pos += 1;
                left = 6;
            }
            left -= 1;
            if (cur >> left) & 1 == 1 {
                g.add_edge(i, j)?;
            }
            bit += 1;
        }
    }
    debug_assert_eq!(bit, nbits);
    if left > 0 && cur & ((1 << left) - 1) != 0 {
        return Err(Graph6Error::Padding {
            offset: base + pos - 1,
        });
    }
    Ok(g)
}

fn shift(e: Graph6Error, base: usize) -> Graph6Error {
    match e {
        Graph6Error::BadByte { offset, byte } => Graph6Error::BadByte {
            offset: offset + base,
            byte,
        },
        Graph6Error::TruncatedHeader { offset } => Graph6Error::TruncatedHeader {
            offset: offset + base,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_strings() {
        // petgraph / nauty reference: a-c, a-e, b-d, d-e on five vertices
        let g = Graph::from_edges(5, [(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(encode(&g), "DQc");
        assert_eq!(decode("DQc").unwrap(), g);

        assert_eq!(encode(&Graph::empty(0).unwrap()), "?");
        assert_eq!(encode(&Graph::empty(1).unwrap()), "@");
        assert_eq!(encode(&Graph::complete(2)), "A_");
        assert_eq!(encode(&Graph::complete(4)), "C~");
        assert_eq!(encode(&Graph::petersen()).len(), 1 + 8);
        assert_eq!(decode(">>graph6<<C~\n").unwrap(), Graph::complete(4));
    }

    #[test]
    fn long_header() {
        let g = Graph::path(70);
        let s = encode(&g);
        assert_eq!(&s.as_bytes()[..4], &[126, 63, 64, 63 + 6]);
        assert_eq!(decode(&s).unwrap(), g);
    }

    #[test]
    fn decode_errors_report_offsets() {
        assert_eq!(
            decode("C~ x"),
            Err(Graph6Error::Length {
                offset: 1,
                order: 4,
                expected: 1,
                found: 3
            })
        );
        assert_eq!(
            decode("D\u{7}c"),
            Err(Graph6Error::BadByte { offset: 1, byte: 7 })
        );
        assert_eq!(decode("~?"), Err(Graph6Error::TruncatedHeader { offset: 2 }));
        // K2 uses one bit; setting a padding bit is invalid
        assert_eq!(decode("A`"), Err(Graph6Error::Padding { offset: 1 }));
    }

    proptest! {
        #[test]
        fn round_trip(n in 0usize..80, bits in proptest::collection::vec(any::<bool>(), 0..3200)) {
            let mut g = Graph::empty(n).unwrap();
            let mut k = 0;
            for j in 1..n {
                for i in 0..j {
                    if bits.get(k).copied().unwrap_or(false) {
                        g.add_edge(i, j).unwrap();
                    }
                    k += 1;
                }
            }
            prop_assert_eq!(decode(&encode(&g)).unwrap(), g);
        }
    }
}
