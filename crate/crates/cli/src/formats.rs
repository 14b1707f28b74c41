//! On-disk formats: read files (header plus one string per line) and
//! codebook files (header plus one comma-separated run vector per line).

use anyhow::{anyhow, Context, Result};
use tandemdup::codes::SimplexCode;
use tandemdup::error::Error as CoreError;
use tandemdup::strings::GString;
use tandemdup::transform::stats;

pub struct ReadsFile {
    pub q: u32,
    pub k: usize,
    pub strings: Vec<GString>,
}

pub fn render_reads(q: u32, k: usize, reads: &[GString]) -> String {
    let mut out = format!("# q={q} k={k}\n");
    for read in reads {
        out.push_str(&read.to_string());
        out.push('\n');
    }
    out
}

fn header_fields(line: &str) -> Result<Vec<(String, String)>> {
    let body = line.trim_start_matches('#').trim();
    body.split_whitespace()
        .map(|tok| {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| bad_input(format!("malformed header field '{tok}'")))?;
            Ok((key.to_string(), value.to_string()))
        })
        .collect()
}

fn bad_input(msg: String) -> anyhow::Error {
    anyhow!(CoreError::InvalidInput(msg))
}

fn lookup<'a>(fields: &'a [(String, String)], key: &str) -> Result<&'a str> {
    fields
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| bad_input(format!("header is missing '{key}='")))
}

pub fn parse_reads(text: &str) -> Result<ReadsFile> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| bad_input("empty reads file".into()))?;
    if !header.starts_with('#') {
        return Err(bad_input(
            "reads file must start with a '# q=<q> k=<k>' header".into(),
        ));
    }
    let fields = header_fields(header)?;
    let q: u32 = lookup(&fields, "q")?.parse().context("bad q in header")?;
    let k: usize = lookup(&fields, "k")?.parse().context("bad k in header")?;
    let mut strings = Vec::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        strings.push(GString::parse(line, q, k)?);
    }
    if strings.is_empty() {
        return Err(bad_input("reads file contains no reads".into()));
    }
    Ok(ReadsFile { q, k, strings })
}

pub fn render_codebook(code: &SimplexCode) -> String {
    let mut out = format!(
        "# root={} q={} k={} w={} r={} d={} typ={}\n",
        code.root(),
        code.root().q(),
        code.root().k(),
        code.w(),
        code.r(),
        code.d(),
        u8::from(code.typical_subset())
    );
    for word in code.words() {
        let parts: Vec<String> = word.iter().map(|v| v.to_string()).collect();
        out.push_str(&parts.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_codebook(text: &str) -> Result<SimplexCode> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| bad_input("empty codebook file".into()))?;
    if !header.starts_with('#') {
        return Err(bad_input(
            "codebook file must start with a '# root=... q=... k=... w=... r=... d=...' header"
                .into(),
        ));
    }
    let fields = header_fields(header)?;
    let q: u32 = lookup(&fields, "q")?.parse().context("bad q")?;
    let k: usize = lookup(&fields, "k")?.parse().context("bad k")?;
    let root = GString::parse(lookup(&fields, "root")?, q, k)?;
    let w: u64 = lookup(&fields, "w")?.parse().context("bad w")?;
    let r: u64 = lookup(&fields, "r")?.parse().context("bad r")?;
    let d: u64 = lookup(&fields, "d")?.parse().context("bad d")?;
    let typ = match fields.iter().find(|(key, _)| key == "typ") {
        Some((_, v)) => v == "1",
        None => false,
    };
    let (root_w, _) = stats(&root);
    if root_w != w {
        return Err(bad_input(format!(
            "header w={w} does not match the root's derivative weight {root_w}"
        )));
    }
    let mut words = Vec::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let word: Vec<u64> = line
            .split(',')
            .map(|tok| tok.trim().parse::<u64>().context("bad codeword entry"))
            .collect::<Result<_>>()?;
        words.push(word);
    }
    Ok(SimplexCode::from_words(root, r, d, words, typ)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_round_trip() {
        let reads = vec![
            GString::parse("10101012122222222", 3, 2).unwrap(),
            GString::parse("10101010122222222", 3, 2).unwrap(),
        ];
        let text = render_reads(3, 2, &reads);
        let parsed = parse_reads(&text).unwrap();
        assert_eq!(parsed.q, 3);
        assert_eq!(parsed.k, 2);
        assert_eq!(parsed.strings, reads);
    }

    #[test]
    fn codebook_round_trip() {
        let root = GString::parse("10122", 3, 2).unwrap();
        let code = SimplexCode::from_words(
            root,
            2,
            2,
            vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]],
            true,
        )
        .unwrap();
        let text = render_codebook(&code);
        let parsed = parse_codebook(&text).unwrap();
        assert_eq!(parsed, code);
    }

    #[test]
    fn rejects_missing_header() {
        assert!(parse_reads("10101\n").is_err());
        assert!(parse_reads("").is_err());
        assert!(parse_reads("# q=3 k=2\n").is_err());
    }
}
