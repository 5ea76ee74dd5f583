//! Monthly signed graphs from daily country-to-country sentiment tallies.

use std::collections::{BTreeMap, HashMap};

use triadnet::{Error, Result, Sign, SignedGraph};

/// One day of events from `source` towards `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentimentRecord {
    /// 1-based day index.
    pub day: usize,
    pub source: String,
    pub target: String,
    pub verbal_cooperation: u64,
    pub verbal_conflict: u64,
    pub material_cooperation: u64,
    pub material_conflict: u64,
    /// Input line, for error messages (0 if not read from text).
    pub line: usize,
}

impl SentimentRecord {
    fn balance(&self) -> i128 {
        (self.verbal_cooperation + self.material_cooperation) as i128
            - (self.verbal_conflict + self.material_conflict) as i128
    }
}

/// Parses whitespace-separated lines `day source target vcoop vconf mcoop mconf`.
/// Blank lines and `#` comments are skipped.
pub fn parse_records(text: &str) -> Result<Vec<SentimentRecord>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let t: Vec<&str> = body.split_whitespace().collect();
        if t.len() != 7 {
            return Err(Error::Parse { line, message: format!("expected 7 fields, found {}", t.len()) });
        }
        let num = |s: &str, what: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Parse { line, message: format!("{what} {s:?} is not a non-negative integer") })
        };
        let day = num(t[0], "day")? as usize;
        if day == 0 {
            return Err(Error::Parse { line, message: "days are numbered from 1".into() });
        }
        out.push(SentimentRecord {
            day,
            source: t[1].to_string(),
            target: t[2].to_string(),
            verbal_cooperation: num(t[3], "count")?,
            verbal_conflict: num(t[4], "count")?,
            material_cooperation: num(t[5], "count")?,
            material_conflict: num(t[6], "count")?,
            line,
        });
    }
    Ok(out)
}

/// Fixed node numbering for country tokens.
#[derive(Clone, Debug, Default)]
pub struct Countries {
    ids: HashMap<String, usize>,
    labels: Vec<String>,
}

impl Countries {
    /// Registry from one token per line, in file order.
    pub fn from_list(text: &str) -> Result<Self> {
        let mut c = Countries::default();
        for (i, raw) in text.lines().enumerate() {
            let tok = raw.split('#').next().unwrap_or("").trim();
            if tok.is_empty() {
                continue;
            }
            if c.ids.insert(tok.to_string(), c.labels.len()).is_some() {
                return Err(Error::Parse { line: i + 1, message: format!("duplicate country {tok:?}") });
            }
            c.labels.push(tok.to_string());
        }
        Ok(c)
    }

    /// Every token seen in `records`, sorted, so all months share node ids.
    pub fn from_records(records: &[SentimentRecord]) -> Self {
        let mut labels: Vec<String> = records.iter().flat_map(|r| [r.source.clone(), r.target.clone()]).collect();
        labels.sort_unstable();
        labels.dedup();
        let ids = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Countries { ids, labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn id(&self, token: &str, line: usize) -> Result<usize> {
        self.ids.get(token).copied().ok_or_else(|| Error::UnknownToken { token: token.to_string(), line })
    }
}

/// Number of 30-day months needed to cover the records.
pub fn month_count(records: &[SentimentRecord]) -> usize {
    records.iter().map(|r| r.day.div_ceil(30)).max().unwrap_or(0)
}

fn signum(x: i128) -> i8 {
    x.signum() as i8
}

/// Signed graph of month `month` (1-based, days 30(month-1)+1 ..= 30 month).
/// Daily directed signs are signum(cooperation - conflict), summed over the
/// month and reduced by signum; the two directions of a pair then combine to
/// one undirected edge (agreeing or one-sided signs survive, opposite signs
/// and silence give no edge). Every record is checked against the registry.
pub fn aggregate_signed_month(records: &[SentimentRecord], month: usize, countries: &Countries) -> Result<SignedGraph> {
    if month == 0 {
        return Err(Error::UndefinedInput("months are numbered from 1".into()));
    }
    let (first, last) = (30 * (month - 1) + 1, 30 * month);
    let mut daily: BTreeMap<(usize, usize, usize), i128> = BTreeMap::new();
    for r in records {
        let (s, t) = (countries.id(&r.source, r.line)?, countries.id(&r.target, r.line)?);
        if s == t || r.day < first || r.day > last {
            continue;
        }
        *daily.entry((s, t, r.day)).or_default() += r.balance();
    }
    let mut monthly: BTreeMap<(usize, usize), i128> = BTreeMap::new();
    for ((s, t, _), v) in daily {
        *monthly.entry((s, t)).or_default() += signum(v) as i128;
    }
    let directed = |s: usize, t: usize| monthly.get(&(s, t)).map_or(0, |&v| signum(v));
    let mut g = SignedGraph::new(countries.len());
    let pairs: Vec<(usize, usize)> = monthly.keys().map(|&(s, t)| (s.min(t), s.max(t))).collect();
    for (a, b) in pairs {
        let (x, y) = (directed(a, b), directed(b, a));
        let sign = match (x, y) {
            (1, 1) | (1, 0) | (0, 1) => Some(Sign::Positive),
            (-1, -1) | (-1, 0) | (0, -1) => Some(Sign::Negative),
            _ => None,
        };
        if let Some(s) = sign {
            g.add_edge(a, b, s);
        }
    }
    Ok(g)
}
