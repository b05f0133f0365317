use super::{parse, Formula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Identity,
    Nonzero,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
    pub formula: Formula,
    pub expected: Expected,
}

const ENTRIES: [(&str, &str, Expected); 5] = [
    ("x1", "x1", Expected::Nonzero),
    ("inv-cancel", "inv(x1)*x1 - 1", Expected::Identity),
    ("comm-inv", "inv(x1*x2 - x2*x1)", Expected::Nonzero),
    ("hua", "inv(x1 + x1*inv(x2)*x1) + inv(x1+x2) - inv(x1)", Expected::Identity),
    ("nested-inv", "inv(x3 + x1*inv(x2)*x1) - inv(x3)", Expected::Nonzero),
];

/// Named formulas with known status.
pub fn corpus() -> Vec<CorpusEntry> {
    ENTRIES
        .iter()
        .map(|&(name, text, expected)| CorpusEntry { name, text, formula: parse(text).unwrap(), expected })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contents() {
        let c = corpus();
        let find = |n: &str| c.iter().find(|e| e.name == n).unwrap();
        assert_eq!(find("hua").expected, Expected::Identity);
        assert_eq!(find("comm-inv").expected, Expected::Nonzero);
        assert_eq!(find("x1").formula.measures(), (1, 0, 1));
        assert_eq!(find("inv-cancel").formula.height(), 1);
        assert_eq!(find("nested-inv").formula.height(), 2);
    }
}
