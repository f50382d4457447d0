use super::{parse_graph6, Graph};
use crate::construction::ConstructionSpec;
use crate::error::{Error, Result};

/// Builds a member of a named family.
///
/// Vertex `i` corresponds to the label `a_{i+1}`. Stars put the centre at
/// vertex 0. The paw has its pendant vertex at `a_2` hanging from the
/// degree-3 vertex `a_1`; the diamond has its two degree-3 vertices at
/// `a_2` and `a_4`.
pub fn named_graph(family: &str, params: &[usize]) -> Result<Graph> {
    let one = |min: usize| -> Result<usize> {
        match params {
            [n] if *n >= min => Ok(*n),
            [n] => Err(Error::InvalidParameter(format!("{family}{n}: need n >= {min}"))),
            _ => Err(Error::InvalidParameter(format!("{family} takes exactly one parameter"))),
        }
    };
    let none = || -> Result<()> {
        if params.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{family} takes no parameters")))
        }
    };
    match family {
        "K" => {
            let n = one(1)?;
            Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        }
        "S" => {
            let n = one(1)?;
            Graph::new(n, (1..n).map(|v| (0, v)))
        }
        "C" => {
            let n = one(3)?;
            Graph::new(n, (0..n).map(|v| (v, (v + 1) % n)))
        }
        "P" => {
            let n = one(1)?;
            Graph::new(n, (1..n).map(|v| (v - 1, v)))
        }
        "paw" | "Y" => {
            none()?;
            Graph::new(4, [(0, 1), (0, 2), (0, 3), (2, 3)])
        }
        "diamond" | "D" => {
            none()?;
            Graph::new(4, [(0, 1), (0, 3), (1, 2), (1, 3), (2, 3)])
        }
        _ => Err(Error::UnknownFamily(family.to_string())),
    }
}

/// Parses the command-line graph syntax: `K4`, `P10`, `S3`, `C5`, `paw`,
/// `diamond`, `construction:k=3,m=3`, or `g6:<graph6>`.
pub fn parse_graph_spec(spec: &str) -> Result<Graph> {
    let s = spec.trim();
    if let Some(code) = s.strip_prefix("g6:") {
        return parse_graph6(code);
    }
    if let Some(rest) = s.strip_prefix("construction:") {
        let spec = ConstructionSpec::parse(rest)?;
        return Ok(spec.build()?.graph);
    }
    if s == "paw" || s == "diamond" {
        return named_graph(s, &[]);
    }
    let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
    let (family, digits) = s.split_at(split);
    if family.is_empty() {
        return Err(Error::UnknownFamily(s.to_string()));
    }
    if digits.is_empty() {
        return named_graph(family, &[]);
    }
    let n: usize = digits
        .parse()
        .map_err(|_| Error::Parse(format!("bad vertex count in {s:?}")))?;
    named_graph(family, &[n])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_edge_count() {
        assert_eq!(named_graph("K", &[4]).unwrap().size(), 6);
    }

    #[test]
    fn path_edges() {
        assert_eq!(named_graph("P", &[4]).unwrap().edges(), &[(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn diamond_degrees() {
        let d = named_graph("diamond", &[]).unwrap();
        assert_eq!(d.size(), 5);
        let degrees: Vec<usize> = (0..4).map(|v| d.degree(v)).collect();
        assert_eq!(degrees, vec![2, 3, 2, 3]);
    }

    #[test]
    fn paw_shape() {
        let y = named_graph("paw", &[]).unwrap();
        let degrees: Vec<usize> = (0..4).map(|v| y.degree(v)).collect();
        assert_eq!(degrees, vec![3, 1, 2, 2]);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(named_graph("C", &[2]), Err(Error::InvalidParameter(_))));
        assert!(matches!(named_graph("P", &[0]), Err(Error::InvalidParameter(_))));
        assert!(matches!(named_graph("Q", &[3]), Err(Error::UnknownFamily(_))));
        assert!(named_graph("paw", &[3]).is_err());
    }

    #[test]
    fn spec_syntax() {
        assert_eq!(parse_graph_spec("K4").unwrap(), named_graph("K", &[4]).unwrap());
        assert_eq!(parse_graph_spec("P10").unwrap().order(), 10);
        assert_eq!(parse_graph_spec("g6:Ch").unwrap(), named_graph("P", &[4]).unwrap());
        assert!(parse_graph_spec("construction:k=2,m=1").unwrap().is_connected());
        assert!(parse_graph_spec("7").is_err());
        assert!(parse_graph_spec("K").is_err());
    }
}
