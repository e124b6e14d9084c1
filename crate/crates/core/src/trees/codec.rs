use super::{node_arity, Node, TreeMonomial};
use crate::error::{Error, Result};

pub(super) fn compact(code: &[Node]) -> String {
    code.iter()
        .map(|c| match c {
            Node::Leaf => '0',
            Node::Mu => '1',
            Node::Xi => '2',
        })
        .collect()
}

pub(super) fn parse_compact(n: usize, s: &str) -> Result<TreeMonomial> {
    let code = s
        .trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(Node::Leaf),
            '1' => Ok(Node::Mu),
            '2' => Ok(Node::Xi),
            _ => Err(Error::MalformedCode {
                code: s.to_string(),
                reason: format!("unexpected {c:?}"),
            }),
        })
        .collect::<Result<Vec<_>>>()?;
    TreeMonomial::new(n, code)
}

pub(super) fn nested(t: &TreeMonomial) -> String {
    if t.code == [Node::Leaf] {
        return "|".to_string();
    }
    let mut out = String::new();
    write_nested(t, 0, &mut out);
    out
}

fn write_nested(t: &TreeMonomial, pos: usize, out: &mut String) -> usize {
    match t.code[pos] {
        Node::Leaf => pos + 1,
        node => {
            out.push(if node == Node::Mu { 'm' } else { 'x' });
            out.push('(');
            let mut next = pos + 1;
            for k in 0..node_arity(node, t.n) {
                if k > 0 {
                    out.push(',');
                }
                next = write_nested(t, next, out);
            }
            out.push(')');
            next
        }
    }
}

pub(super) fn parse_nested(n: usize, s: &str) -> Result<TreeMonomial> {
    let s = s.trim();
    if s == "|" {
        return TreeMonomial::new(n, vec![Node::Leaf]);
    }
    let bytes = s.as_bytes();
    let mut code = Vec::new();
    let mut pos = 0;
    parse_vertex(bytes, &mut pos, n, &mut code).map_err(|reason| Error::MalformedCode {
        code: s.to_string(),
        reason,
    })?;
    if pos != bytes.len() {
        return Err(Error::MalformedCode {
            code: s.to_string(),
            reason: format!("trailing input at {pos}"),
        });
    }
    TreeMonomial::new(n, code)
}

fn parse_vertex(
    b: &[u8],
    pos: &mut usize,
    n: usize,
    code: &mut Vec<Node>,
) -> std::result::Result<(), String> {
    let node = match b.get(*pos) {
        Some(b'm') => Node::Mu,
        Some(b'x') => Node::Xi,
        other => {
            return Err(format!(
                "expected 'm' or 'x' at {}, found {:?}",
                *pos,
                other.map(|&c| c as char)
            ))
        }
    };
    *pos += 1;
    if b.get(*pos) != Some(&b'(') {
        return Err(format!("expected '(' at {}", *pos));
    }
    *pos += 1;
    code.push(node);
    let k = node_arity(node, n);
    for i in 0..k {
        match b.get(*pos) {
            Some(b',') | Some(b')') => code.push(Node::Leaf),
            _ => parse_vertex(b, pos, n, code)?,
        }
        let expected = if i + 1 == k { b')' } else { b',' };
        if b.get(*pos) != Some(&expected) {
            return Err(format!("expected {:?} at {}", expected as char, *pos));
        }
        *pos += 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{enumerate_trees, VertexCounts};
    use proptest::prelude::*;

    #[test]
    fn nested_examples() {
        let t = TreeMonomial::from_nested(3, "m(m(,,),,)").unwrap();
        assert_eq!(t.to_compact(), "1100000");
        assert_eq!(TreeMonomial::identity(3).to_nested(), "|");
        assert_eq!(
            TreeMonomial::from_nested(3, "|").unwrap(),
            TreeMonomial::identity(3)
        );
        assert!(TreeMonomial::from_nested(3, "m(,)").is_err());
        assert!(TreeMonomial::from_nested(3, "m(,,)x").is_err());
        assert!(TreeMonomial::from_compact(2, "1200").is_err());
    }

    proptest! {
        #[test]
        fn codecs_round_trip(n in 2usize..5, mu in 0usize..4, xi in 0usize..3, pick in any::<prop::sample::Index>()) {
            let all = enumerate_trees(n, VertexCounts { mu, xi });
            let t = &all[pick.index(all.len())];
            prop_assert_eq!(&TreeMonomial::from_nested(n, &t.to_nested()).unwrap(), t);
            prop_assert_eq!(&TreeMonomial::from_compact(n, &t.to_compact()).unwrap(), t);
            prop_assert_eq!(t.counts(), VertexCounts { mu, xi });
        }
    }
}
