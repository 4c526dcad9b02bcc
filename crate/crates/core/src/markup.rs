//! Headline/body extraction and the web-markup feature group.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::html::{Document, NodeId};

/// Tag groups, in feature order. Membership follows the functional
/// grouping of HTML tags (basic, formatting, forms, frames, images,
/// audio/video, links, lists, tables, semantics, meta, programming).
pub const TAG_GROUPS: [(&str, &[&str]); 12] = [
    ("BT", &["html", "body", "title", "h1", "h2", "h3", "h4", "h5", "h6", "p", "br", "hr"]),
    (
        "FT",
        &[
            "b", "i", "u", "em", "strong", "small", "sub", "sup", "mark", "del", "ins", "abbr",
            "acronym", "blockquote", "cite", "code", "pre", "q", "s",
        ],
    ),
    (
        "FIT",
        &[
            "form", "input", "textarea", "button", "select", "option", "optgroup", "label",
            "fieldset", "legend", "datalist", "output",
        ],
    ),
    ("FRT", &["frame", "frameset", "noframes", "iframe"]),
    ("IT", &["img", "map", "area", "canvas", "figure", "figcaption", "picture", "svg"]),
    ("AVT", &["audio", "video", "source", "track", "embed"]),
    ("LKT", &["a", "nav", "link"]),
    ("LT", &["ul", "ol", "li", "dl", "dt", "dd"]),
    (
        "TT",
        &["table", "caption", "th", "tr", "td", "thead", "tbody", "tfoot", "col", "colgroup"],
    ),
    (
        "ST",
        &["article", "section", "aside", "header", "footer", "main", "details", "summary", "dialog"],
    ),
    ("MT", &["head", "meta", "base", "style"]),
    ("PT", &["script", "noscript", "object", "param"]),
];

/// Names of the web-markup features in schema order.
pub const MARKUP_FEATURE_NAMES: [&str; 14] = [
    "BT", "FT", "FIT", "FRT", "IT", "AVT", "LKT", "LT", "TT", "ST", "MT", "PT", "ADS", "AU",
];

/// Index into [`TAG_GROUPS`] for a lowercased tag name.
pub fn tag_group(tag: &str) -> Option<usize> {
    TAG_GROUPS.iter().position(|(_, tags)| tags.contains(&tag))
}

const AD_TOKENS: &[&str] = &[
    "ad", "ads", "advert", "advertisement", "sponsored", "adsbygoogle", "taboola", "outbrain",
    "doubleclick",
];

const DEFAULT_AD_DOMAINS: &str = include_str!("../resources/ad_domains.txt");

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Article {
    pub headline: String,
    pub content: String,
    pub extraction_notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WebMarkupFeatures {
    /// Counts aligned with [`TAG_GROUPS`].
    pub tag_group_counts: [u32; 12],
    pub ads_count: u32,
    pub author_present: u8,
}

impl WebMarkupFeatures {
    /// Values in [`MARKUP_FEATURE_NAMES`] order.
    pub fn values(&self) -> [f64; 14] {
        let mut out = [0.0; 14];
        for (o, c) in out.iter_mut().zip(self.tag_group_counts.iter()) {
            *o = f64::from(*c);
        }
        out[12] = f64::from(self.ads_count);
        out[13] = f64::from(self.author_present);
        out
    }

    pub fn group(&self, name: &str) -> Option<u32> {
        TAG_GROUPS
            .iter()
            .position(|(n, _)| *n == name)
            .map(|i| self.tag_group_counts[i])
    }
}

/// Registrable domains whose scripts/frames/images count as advertising.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdDomains {
    domains: BTreeSet<String>,
}

impl AdDomains {
    /// Parse a one-domain-per-line list; blank lines and `#` comments skipped.
    pub fn parse(list: &str) -> Self {
        let domains = list
            .lines()
            .map(|l| l.trim())
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.trim_start_matches("*.").to_ascii_lowercase())
            .collect();
        AdDomains { domains }
    }

    pub fn extend(&mut self, other: &AdDomains) {
        self.domains.extend(other.domains.iter().cloned());
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    /// True if `host` is one of the domains or a subdomain of one.
    pub fn matches_host(&self, host: &str) -> bool {
        let host = host.trim_end_matches('.');
        let mut candidate = host;
        loop {
            if self.domains.contains(candidate) {
                return true;
            }
            match candidate.find('.') {
                Some(dot) => candidate = &candidate[dot + 1..],
                None => return false,
            }
        }
    }
}

impl Default for AdDomains {
    fn default() -> Self {
        AdDomains::parse(DEFAULT_AD_DOMAINS)
    }
}

/// Host part of an absolute or protocol-relative URL, lowercased.
pub fn url_host(src: &str) -> Option<String> {
    let s = src.trim();
    let after = if let Some(i) = s.find("://") {
        let scheme = &s[..i];
        if scheme.is_empty() || !scheme.chars().all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c)) {
            return None;
        }
        &s[i + 3..]
    } else if let Some(rest) = s.strip_prefix("//") {
        rest
    } else {
        return None;
    };
    let end = after.find(['/', '?', '#']).unwrap_or(after.len());
    let authority = &after[..end];
    let host = authority.rsplit('@').next().unwrap_or(authority);
    let host = host.split(':').next().unwrap_or(host);
    if host.is_empty() {
        None
    } else {
        Some(host.to_ascii_lowercase())
    }
}

/// Delimiter-separated tokens of a class/id attribute, lowercased.
fn attr_tokens(value: &str) -> impl Iterator<Item = String> + '_ {
    value
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
}

fn has_token(doc: &Document, id: NodeId, wanted: &[&str]) -> bool {
    let Some(e) = doc.element(id) else { return false };
    ["class", "id"].iter().any(|a| {
        e.attr(a)
            .is_some_and(|v| attr_tokens(v).any(|t| wanted.contains(&t.as_str())))
    })
}

pub fn count_ads(doc: &Document, ad_domains: &AdDomains) -> u32 {
    let mut count = 0;
    for (id, e) in doc.elements() {
        let by_src = matches!(e.name.as_str(), "iframe" | "script" | "img" | "ins")
            && e.attr("src")
                .and_then(url_host)
                .is_some_and(|h| ad_domains.matches_host(&h));
        if by_src || has_token(doc, id, AD_TOKENS) {
            count += 1;
        }
    }
    count
}

pub fn detect_author(doc: &Document) -> u8 {
    let found = doc.elements().any(|(id, e)| {
        let nonempty_content = || e.attr("content").is_some_and(|c| !c.trim().is_empty());
        if e.name == "meta" {
            let name = e.attr("name").map(str::to_ascii_lowercase);
            let prop = e.attr("property").map(str::to_ascii_lowercase);
            if (name.as_deref() == Some("author") || prop.as_deref() == Some("article:author"))
                && nonempty_content()
            {
                return true;
            }
        }
        if e.attr("rel")
            .is_some_and(|r| r.split_ascii_whitespace().any(|t| t.eq_ignore_ascii_case("author")))
        {
            return true;
        }
        has_token(doc, id, &["byline", "author"]) && !doc.text_content(id, &[]).trim().is_empty()
    });
    u8::from(found)
}

pub fn markup_features(doc: &Document, ad_domains: &AdDomains) -> WebMarkupFeatures {
    let mut counts = [0u32; 12];
    for (_, e) in doc.elements() {
        if let Some(g) = tag_group(&e.name) {
            counts[g] += 1;
        }
    }
    WebMarkupFeatures {
        tag_group_counts: counts,
        ads_count: count_ads(doc, ad_domains),
        author_present: detect_author(doc),
    }
}

/// Collapse runs of whitespace to single spaces and trim.
pub fn collapse_whitespace(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

const BLOCK_ELEMENTS: &[&str] = &[
    "address", "article", "aside", "blockquote", "br", "dd", "details", "dialog", "div", "dl",
    "dt", "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5",
    "h6", "header", "hr", "li", "main", "nav", "ol", "p", "pre", "section", "summary", "table",
    "td", "th", "tr", "ul", "title",
];

/// Text of a subtree with block boundaries kept as newlines and other
/// whitespace collapsed.
fn block_text(doc: &Document, id: NodeId, skip: &[&str]) -> String {
    let mut paragraphs: Vec<String> = Vec::new();
    let mut current = String::new();
    walk_blocks(doc, id, skip, &mut current, &mut paragraphs);
    paragraphs.push(current);
    join_paragraphs(paragraphs.iter().map(String::as_str))
}

fn walk_blocks(doc: &Document, id: NodeId, skip: &[&str], current: &mut String, out: &mut Vec<String>) {
    use crate::html::{NodeData, NON_TEXT_ELEMENTS};
    for &child in &doc.node(id).children {
        match &doc.node(child).data {
            NodeData::Text(t) => current.push_str(t),
            NodeData::Element(e) => {
                let name = e.name.as_str();
                if NON_TEXT_ELEMENTS.contains(&name) || skip.contains(&name) {
                    continue;
                }
                let block = BLOCK_ELEMENTS.contains(&name);
                if block {
                    out.push(core::mem::take(current));
                }
                walk_blocks(doc, child, skip, current, out);
                if block {
                    out.push(core::mem::take(current));
                }
            }
            NodeData::Document => {}
        }
    }
}

fn join_paragraphs<'a>(parts: impl Iterator<Item = &'a str>) -> String {
    let mut out = String::new();
    for p in parts {
        let c = collapse_whitespace(p);
        if c.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&c);
    }
    out
}

fn headline(doc: &Document) -> Option<(String, &'static str)> {
    let og = doc.elements().find_map(|(_, e)| {
        let is_og = e.name == "meta"
            && e.attr("property").is_some_and(|p| p.eq_ignore_ascii_case("og:title"));
        if !is_og {
            return None;
        }
        let c = collapse_whitespace(e.attr("content").unwrap_or(""));
        (!c.is_empty()).then_some(c)
    });
    if let Some(h) = og {
        return Some((h, "headline: og:title"));
    }
    for (tag, note) in [("title", "headline: title"), ("h1", "headline: h1")] {
        if let Some(id) = doc.first_named(tag) {
            let t = collapse_whitespace(&doc.text_content(id, &[]));
            if !t.is_empty() {
                return Some((t, note));
            }
        }
    }
    None
}

/// Headline and body text of a page.
///
/// Headline: `og:title` meta, else `<title>`, else the first `<h1>`.
/// Content: the first `<article>`, else all `<p>` under the body joined by
/// newlines, else the body text without script/style/nav/footer/aside.
pub fn extract_article(doc: &Document) -> Article {
    let mut notes = Vec::new();
    let headline = match headline(doc) {
        Some((h, note)) => {
            notes.push(note.to_string());
            h
        }
        None => {
            notes.push("no headline source".to_string());
            String::new()
        }
    };

    let body = doc.first_named("body").unwrap_or(doc.root());
    let mut content = String::new();
    if let Some(article) = doc.first_named("article") {
        content = block_text(doc, article, &[]);
        if !content.is_empty() {
            notes.push("content: article".to_string());
        }
    }
    if content.is_empty() {
        let paragraphs: Vec<String> = doc
            .descendants(body)
            .filter(|&id| doc.element(id).is_some_and(|e| e.name == "p"))
            .map(|id| doc.text_content(id, &[]))
            .collect();
        content = join_paragraphs(paragraphs.iter().map(String::as_str));
        if !content.is_empty() {
            notes.push("content: paragraphs".to_string());
        }
    }
    if content.is_empty() {
        content = block_text(doc, body, &["nav", "footer", "aside", "head"]);
        if !content.is_empty() {
            notes.push("content: body".to_string());
        }
    }
    if content.is_empty() {
        notes.push("no content source".to_string());
    }
    Article {
        headline,
        content,
        extraction_notes: notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feats(html: &str) -> WebMarkupFeatures {
        markup_features(&Document::parse_str(html), &AdDomains::default())
    }

    #[test]
    fn group_table_has_no_overlaps() {
        let mut seen = BTreeSet::new();
        for (_, tags) in TAG_GROUPS {
            for t in tags {
                assert!(seen.insert(*t), "{t} in two groups");
            }
        }
    }

    #[test]
    fn basic_and_link_counts() {
        let f = feats(r##"<html><body><p>x</p><a href="#">l</a></body></html>"##);
        assert_eq!(f.group("BT"), Some(3));
        assert_eq!(f.group("LKT"), Some(1));
        let total: u32 = f.tag_group_counts.iter().sum();
        assert_eq!(total, 4);
        assert_eq!((f.ads_count, f.author_present), (0, 0));
    }

    #[test]
    fn empty_tree_all_zero() {
        assert_eq!(feats(""), WebMarkupFeatures::default());
    }

    #[test]
    fn semantic_tags() {
        let f = feats("<article><section>..</section></article>");
        assert_eq!(f.group("ST"), Some(2));
    }

    #[test]
    fn ad_rules() {
        let doc = |s: &str| Document::parse_str(s);
        let ads = AdDomains::default();
        assert_eq!(
            count_ads(&doc(r#"<script src="https://pagead2.googlesyndication.com/x.js"></script>"#), &ads),
            1
        );
        assert_eq!(count_ads(&doc(r#"<div class="sidebar-ad news"></div>"#), &ads), 1);
        assert_eq!(count_ads(&doc(r#"<div class="badge"></div>"#), &ads), 0);
        // both rules on one element still count once
        assert_eq!(
            count_ads(&doc(r#"<ins class="adsbygoogle" src="//doubleclick.net/a"></ins>"#), &ads),
            1
        );
        // relative src never matches a domain
        assert_eq!(count_ads(&doc(r#"<img src="/taboola.com/x.png">"#), &ads), 0);
        assert_eq!(count_ads(&doc(r#"<div id="AD_slot"></div>"#), &ads), 1);
    }

    #[test]
    fn author_rules() {
        let a = |s: &str| detect_author(&Document::parse_str(s));
        assert_eq!(a(r#"<meta name="author" content="J. Doe">"#), 1);
        assert_eq!(a(r#"<meta name="author" content=" ">"#), 0);
        assert_eq!(a(r#"<meta property="article:author" content="https://x/y">"#), 1);
        assert_eq!(a(r#"<a rel="author" href="/me">me</a>"#), 1);
        assert_eq!(a(r#"<span class="byline">By A. B.</span>"#), 1);
        assert_eq!(a(r#"<span class="byline"> </span>"#), 0);
        assert_eq!(a(r#"<div class="authority">x</div>"#), 0);
        assert_eq!(a("<p>nothing here</p>"), 0);
    }

    #[test]
    fn url_hosts() {
        assert_eq!(url_host("https://a.b.com:8080/x?y").as_deref(), Some("a.b.com"));
        assert_eq!(url_host("//cdn.x.net/a").as_deref(), Some("cdn.x.net"));
        assert_eq!(url_host("/local/path"), None);
        let ads = AdDomains::default();
        assert!(ads.matches_host("pagead2.googlesyndication.com"));
        assert!(!ads.matches_host("notgooglesyndication.com"));
    }

    #[test]
    fn headline_priority() {
        let doc = Document::parse_str(
            r#"<head><meta property="og:title" content="X"><title>Y</title></head><h1>Z</h1>"#,
        );
        let a = extract_article(&doc);
        assert_eq!(a.headline, "X");
        assert_eq!(a.extraction_notes[0], "headline: og:title");
    }

    #[test]
    fn h1_and_paragraph_cascade() {
        let a = extract_article(&Document::parse_str("<h1>Z</h1><p>body.</p>"));
        assert_eq!(a.headline, "Z");
        assert_eq!(a.content, "body.");
        assert!(a.extraction_notes.contains(&"content: paragraphs".to_string()));
    }

    #[test]
    fn headline_less_page() {
        let a = extract_article(&Document::parse_str("<div>just   text\n here</div>"));
        assert_eq!(a.headline, "");
        assert!(a.extraction_notes.contains(&"no headline source".to_string()));
        assert_eq!(a.content, "just text here");
        assert!(a.extraction_notes.contains(&"content: body".to_string()));
    }

    #[test]
    fn article_element_wins_and_keeps_paragraphs() {
        let a = extract_article(&Document::parse_str(
            "<p>outside</p><article><h2>Sub</h2><p>One  two.</p><p>Three.</p><script>x()</script></article>",
        ));
        assert_eq!(a.content, "Sub\nOne two.\nThree.");
    }

    #[test]
    fn body_fallback_strips_boilerplate() {
        let a = extract_article(&Document::parse_str(
            "<body><nav>menu</nav><div>main text</div><footer>foot</footer><aside>side</aside></body>",
        ));
        assert_eq!(a.content, "main text");
    }

    #[test]
    fn empty_page_notes() {
        let a = extract_article(&Document::parse_str(""));
        assert_eq!(a, Article {
            headline: String::new(),
            content: String::new(),
            extraction_notes: alloc::vec!["no headline source".to_string(), "no content source".to_string()],
        });
    }
}
