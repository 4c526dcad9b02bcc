//! A lenient, error-recovering HTML parser.
//!
//! The parser never fails. It builds an element tree from whatever it is
//! given, closing elements implicitly the way browsers do for the common
//! cases (paragraphs, list items, table cells, headings, options), treating
//! `script`/`style` and friends as raw text, and dropping stray end tags.
//! Unlike a full HTML5 tree builder it never synthesizes elements that are
//! not in the source: a bare `<p>hi` yields exactly one `p` element, so tag
//! counts reflect the page as authored.

mod entities;

use alloc::string::String;
use alloc::vec::Vec;

pub use entities::decode as decode_entities;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    /// Lowercased tag name.
    pub name: String,
    /// Attributes in source order; names lowercased, values entity-decoded.
    pub attrs: Vec<(String, String)>,
}

impl Element {
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeData {
    Document,
    Element(Element),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub data: NodeData,
}

impl Node {
    pub fn element(&self) -> Option<&Element> {
        match &self.data {
            NodeData::Element(e) => Some(e),
            _ => None,
        }
    }
}

/// Parsed document. Node 0 is the document root.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    nodes: Vec<Node>,
}

pub const VOID_ELEMENTS: &[&str] = &[
    "area", "base", "br", "col", "embed", "hr", "img", "input", "keygen", "link", "meta", "param",
    "source", "track", "wbr",
];

const RAW_TEXT_ELEMENTS: &[&str] = &["script", "style", "xmp", "noembed", "noframes", "iframe"];
const ESCAPABLE_RAW_TEXT_ELEMENTS: &[&str] = &["title", "textarea"];

// Opening one of these closes an open <p>.
const CLOSES_P: &[&str] = &[
    "address", "article", "aside", "blockquote", "details", "dialog", "div", "dl", "fieldset",
    "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6", "header",
    "hgroup", "hr", "main", "menu", "nav", "ol", "p", "pre", "section", "table", "ul",
];

const SCOPE_BOUNDARIES: &[&str] = &[
    "applet", "caption", "html", "table", "td", "th", "marquee", "object", "template",
];

const HEADINGS: &[&str] = &["h1", "h2", "h3", "h4", "h5", "h6"];

/// Elements whose content never counts as visible text.
pub const NON_TEXT_ELEMENTS: &[&str] = &["script", "style", "noscript", "template"];

impl Document {
    pub fn new() -> Self {
        Document {
            nodes: alloc::vec![Node {
                parent: None,
                children: Vec::new(),
                data: NodeData::Document,
            }],
        }
    }

    /// Parse arbitrary bytes; invalid UTF-8 is replaced with U+FFFD.
    pub fn parse(html: &[u8]) -> Self {
        let text = String::from_utf8_lossy(html);
        Self::parse_str(&text)
    }

    pub fn parse_str(html: &str) -> Self {
        let mut builder = TreeBuilder::new();
        Tokenizer { src: html, pos: 0 }.run(&mut builder);
        builder.doc
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    pub fn element(&self, id: NodeId) -> Option<&Element> {
        self.nodes[id].element()
    }

    /// All descendants of `id` in document order (excluding `id`).
    pub fn descendants(&self, id: NodeId) -> Descendants<'_> {
        let mut stack: Vec<NodeId> = self.nodes[id].children.iter().rev().copied().collect();
        stack.shrink_to_fit();
        Descendants { doc: self, stack }
    }

    /// Every element in document order.
    pub fn elements(&self) -> impl Iterator<Item = (NodeId, &Element)> + '_ {
        self.descendants(self.root())
            .filter_map(move |id| self.element(id).map(|e| (id, e)))
    }

    pub fn elements_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = NodeId> + 'a {
        self.elements().filter(move |(_, e)| e.name == name).map(|(id, _)| id)
    }

    pub fn first_named(&self, name: &str) -> Option<NodeId> {
        self.elements_named(name).next()
    }

    /// Concatenated text of the subtree, skipping script/style-like elements
    /// and any element whose name is in `skip`.
    pub fn text_content(&self, id: NodeId, skip: &[&str]) -> String {
        let mut out = String::new();
        self.collect_text(id, skip, &mut out);
        out
    }

    fn collect_text(&self, id: NodeId, skip: &[&str], out: &mut String) {
        for &child in &self.nodes[id].children {
            match &self.nodes[child].data {
                NodeData::Text(t) => out.push_str(t),
                NodeData::Element(e) => {
                    if NON_TEXT_ELEMENTS.contains(&e.name.as_str()) || skip.contains(&e.name.as_str())
                    {
                        continue;
                    }
                    self.collect_text(child, skip, out);
                }
                NodeData::Document => {}
            }
        }
    }

    /// Serialize back to HTML.
    pub fn to_html(&self) -> String {
        let mut out = String::new();
        for &child in &self.nodes[0].children {
            self.serialize_node(child, false, &mut out);
        }
        out
    }

    fn serialize_node(&self, id: NodeId, raw_parent: bool, out: &mut String) {
        match &self.nodes[id].data {
            NodeData::Text(t) => {
                if raw_parent {
                    out.push_str(t);
                } else {
                    entities::escape_text(t, out);
                }
            }
            NodeData::Element(e) => {
                out.push('<');
                out.push_str(&e.name);
                for (k, v) in &e.attrs {
                    out.push(' ');
                    out.push_str(k);
                    out.push_str("=\"");
                    entities::escape_attr(v, out);
                    out.push('"');
                }
                out.push('>');
                if VOID_ELEMENTS.contains(&e.name.as_str()) {
                    return;
                }
                let raw = RAW_TEXT_ELEMENTS.contains(&e.name.as_str());
                for &child in &self.nodes[id].children {
                    self.serialize_node(child, raw, out);
                }
                out.push_str("</");
                out.push_str(&e.name);
                out.push('>');
            }
            NodeData::Document => {}
        }
    }

    /// Replace every text node's content through `f`.
    pub fn map_text(&mut self, mut f: impl FnMut(&str) -> String) {
        for node in &mut self.nodes {
            if let NodeData::Text(t) = &mut node.data {
                *t = f(t);
            }
        }
    }

    fn push(&mut self, parent: NodeId, data: NodeData) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(Node {
            parent: Some(parent),
            children: Vec::new(),
            data,
        });
        self.nodes[parent].children.push(id);
        id
    }
}

impl Default for Document {
    fn default() -> Self {
        Self::new()
    }
}

pub struct Descendants<'a> {
    doc: &'a Document,
    stack: Vec<NodeId>,
}

impl Iterator for Descendants<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let id = self.stack.pop()?;
        self.stack
            .extend(self.doc.nodes[id].children.iter().rev().copied());
        Some(id)
    }
}

struct TreeBuilder {
    doc: Document,
    open: Vec<NodeId>,
}

impl TreeBuilder {
    fn new() -> Self {
        TreeBuilder {
            doc: Document::new(),
            open: alloc::vec![0],
        }
    }

    fn current(&self) -> NodeId {
        *self.open.last().expect("root is never popped")
    }

    fn current_name(&self) -> Option<&str> {
        self.doc.element(self.current()).map(|e| e.name.as_str())
    }

    fn text(&mut self, text: &str) {
        if text.is_empty() {
            return;
        }
        let cur = self.current();
        if let Some(&last) = self.doc.nodes[cur].children.last() {
            if let NodeData::Text(t) = &mut self.doc.nodes[last].data {
                t.push_str(text);
                return;
            }
        }
        self.doc.push(cur, NodeData::Text(String::from(text)));
    }

    /// Position in the open stack of the topmost element named one of `names`,
    /// searching down until a scope boundary (or one of `stop`) is hit.
    fn find_in_scope(&self, names: &[&str], stop: &[&str]) -> Option<usize> {
        for (pos, &id) in self.open.iter().enumerate().skip(1).rev() {
            let name = self.doc.element(id).map(|e| e.name.as_str()).unwrap_or("");
            if names.contains(&name) {
                return Some(pos);
            }
            if SCOPE_BOUNDARIES.contains(&name) || stop.contains(&name) {
                return None;
            }
        }
        None
    }

    fn close_in_scope(&mut self, names: &[&str], stop: &[&str]) {
        if let Some(pos) = self.find_in_scope(names, stop) {
            self.open.truncate(pos);
        }
    }

    fn start_tag(&mut self, name: String, attrs: Vec<(String, String)>, self_closing: bool) {
        let n = name.as_str();
        if CLOSES_P.contains(&n) {
            self.close_in_scope(&["p"], &["button"]);
        }
        match n {
            "li" => self.close_in_scope(&["li"], &["ul", "ol"]),
            "dd" | "dt" => self.close_in_scope(&["dd", "dt"], &["dl"]),
            "tr" => self.close_in_scope(&["tr"], &["tbody", "thead", "tfoot"]),
            "td" | "th" => {
                if let Some(pos) = self.find_in_scope_cells() {
                    self.open.truncate(pos);
                }
            }
            "thead" | "tbody" | "tfoot" => {
                self.close_in_scope(&["thead", "tbody", "tfoot"], &[])
            }
            "option" => {
                if self.current_name() == Some("option") {
                    self.open.pop();
                }
            }
            "optgroup" => {
                if self.current_name() == Some("option") {
                    self.open.pop();
                }
                if self.current_name() == Some("optgroup") {
                    self.open.pop();
                }
            }
            _ => {}
        }
        if HEADINGS.contains(&n) && self.current_name().is_some_and(|c| HEADINGS.contains(&c)) {
            self.open.pop();
        }
        let void = VOID_ELEMENTS.contains(&n);
        let parent = self.current();
        let id = self.doc.push(parent, NodeData::Element(Element { name, attrs }));
        if !void && !self_closing {
            self.open.push(id);
        }
    }

    // td/th close an open cell, but never reach past the enclosing row.
    fn find_in_scope_cells(&self) -> Option<usize> {
        for (pos, &id) in self.open.iter().enumerate().skip(1).rev() {
            let name = self.doc.element(id).map(|e| e.name.as_str()).unwrap_or("");
            match name {
                "td" | "th" => return Some(pos),
                "tr" | "table" => return None,
                _ => {}
            }
        }
        None
    }

    fn end_tag(&mut self, name: &str) {
        if let Some(pos) = self
            .open
            .iter()
            .rposition(|&id| self.doc.element(id).is_some_and(|e| e.name == name))
        {
            if pos > 0 {
                self.open.truncate(pos);
            }
        }
    }
}

struct Tokenizer<'a> {
    src: &'a str,
    pos: usize,
}

impl Tokenizer<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn run(&mut self, b: &mut TreeBuilder) {
        while self.pos < self.src.len() {
            let rest = self.rest();
            let Some(lt) = rest.find('<') else {
                b.text(&entities::decode(rest));
                self.pos = self.src.len();
                break;
            };
            if lt > 0 {
                b.text(&entities::decode(&rest[..lt]));
                self.pos += lt;
                continue;
            }
            let bytes = rest.as_bytes();
            let next = bytes.get(1).copied();
            if rest.starts_with("<!--") {
                self.pos += rest[4..].find("-->").map_or(rest.len(), |e| e + 7);
            } else if next == Some(b'!') || next == Some(b'?') {
                self.pos += rest.find('>').map_or(rest.len(), |e| e + 1);
            } else if next == Some(b'/') && bytes.get(2).is_some_and(|c| c.is_ascii_alphabetic()) {
                let name_end = rest[2..]
                    .find(|c: char| c.is_whitespace() || c == '/' || c == '>')
                    .map_or(rest.len(), |e| e + 2);
                let name = rest[2..name_end].to_ascii_lowercase();
                match rest[name_end..].find('>') {
                    Some(gt) => {
                        self.pos += name_end + gt + 1;
                        b.end_tag(&name);
                    }
                    None => self.pos = self.src.len(),
                }
            } else if next.is_some_and(|c| c.is_ascii_alphabetic()) {
                self.start_tag(b);
            } else {
                b.text("<");
                self.pos += 1;
            }
        }
    }

    fn start_tag(&mut self, b: &mut TreeBuilder) {
        let src = self.src;
        let mut i = self.pos + 1;
        let bytes = src.as_bytes();
        let name_start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'/' && bytes[i] != b'>' {
            i += 1;
        }
        let name = src[name_start..i].to_ascii_lowercase();
        let mut attrs: Vec<(String, String)> = Vec::new();
        let mut self_closing = false;
        loop {
            while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            if i >= bytes.len() {
                // Unterminated tag at end of input: dropped, as browsers do.
                self.pos = src.len();
                return;
            }
            match bytes[i] {
                b'>' => {
                    i += 1;
                    break;
                }
                b'/' => {
                    if bytes.get(i + 1) == Some(&b'>') {
                        self_closing = true;
                        i += 2;
                        break;
                    }
                    i += 1;
                    continue;
                }
                _ => {}
            }
            let an_start = i;
            while i < bytes.len()
                && !bytes[i].is_ascii_whitespace()
                && !matches!(bytes[i], b'=' | b'>')
                && !(bytes[i] == b'/' && bytes.get(i + 1) == Some(&b'>'))
            {
                i += 1;
            }
            let attr_name = src[an_start..i].to_ascii_lowercase();
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            let mut value = String::new();
            if j < bytes.len() && bytes[j] == b'=' {
                j += 1;
                while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] == b'"' || bytes[j] == b'\'') {
                    let q = bytes[j];
                    let vs = j + 1;
                    let ve = src[vs..].find(q as char).map_or(src.len(), |e| vs + e);
                    value = entities::decode(&src[vs..ve]);
                    i = (ve + 1).min(src.len());
                } else {
                    let vs = j;
                    while j < bytes.len() && !bytes[j].is_ascii_whitespace() && bytes[j] != b'>' {
                        j += 1;
                    }
                    value = entities::decode(&src[vs..j]);
                    i = j;
                }
            }
            if !attr_name.is_empty() && !attrs.iter().any(|(k, _)| *k == attr_name) {
                attrs.push((attr_name, value));
            }
        }
        self.pos = i;
        let raw = RAW_TEXT_ELEMENTS.contains(&name.as_str());
        let escapable = ESCAPABLE_RAW_TEXT_ELEMENTS.contains(&name.as_str());
        b.start_tag(name.clone(), attrs, self_closing);
        if (raw || escapable) && !self_closing {
            let rest = &src[self.pos..];
            let close = find_close_tag(rest, &name);
            let content = &rest[..close.unwrap_or(rest.len())];
            if raw {
                b.text(content);
            } else {
                b.text(&entities::decode(content));
            }
            match close {
                Some(c) => {
                    let after = &rest[c..];
                    let gt = after.find('>').map_or(after.len(), |g| g + 1);
                    self.pos += c + gt;
                }
                None => self.pos = src.len(),
            }
            b.end_tag(&name);
        }
    }
}

// Byte offset of the first case-insensitive `</name` in `s`.
fn find_close_tag(s: &str, name: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    let nb = name.as_bytes();
    let mut i = 0;
    while let Some(off) = s[i..].find("</") {
        let start = i + off;
        let after = start + 2;
        if bytes.len() >= after + nb.len() && bytes[after..after + nb.len()].eq_ignore_ascii_case(nb) {
            let term = bytes.get(after + nb.len());
            if term.is_none_or(|c| c.is_ascii_whitespace() || *c == b'>' || *c == b'/') {
                return Some(start);
            }
        }
        i = after;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn names(doc: &Document) -> Vec<String> {
        doc.elements().map(|(_, e)| e.name.clone()).collect()
    }

    #[test]
    fn unclosed_paragraph_yields_one_p() {
        let doc = Document::parse(b"<p>hi");
        assert_eq!(names(&doc), vec!["p"]);
        assert_eq!(doc.text_content(doc.root(), &[]), "hi");
    }

    #[test]
    fn empty_input_is_empty_tree() {
        let doc = Document::parse(b"");
        assert!(doc.is_empty());
        assert_eq!(doc.elements().count(), 0);
    }

    #[test]
    fn nested_counts() {
        let doc = Document::parse(b"<div><p>a</p><p>b</p></div>");
        assert_eq!(names(&doc), vec!["div", "p", "p"]);
        let div = doc.first_named("div").unwrap();
        assert_eq!(doc.node(div).children.len(), 2);
    }

    #[test]
    fn tag_names_lowercased_and_attrs_decoded() {
        let doc = Document::parse(b"<DIV CLASS='a&amp;b' id=x>t</Div>");
        let (_, e) = doc.elements().next().unwrap();
        assert_eq!(e.name, "div");
        assert_eq!(e.attr("class"), Some("a&b"));
        assert_eq!(e.attr("id"), Some("x"));
    }

    #[test]
    fn implied_paragraph_and_list_item_closing() {
        let doc = Document::parse(b"<p>one<p>two<ul><li>a<li>b</ul>");
        let body: Vec<_> = doc.node(0).children.clone();
        assert_eq!(body.len(), 3); // p, p, ul
        let ul = doc.first_named("ul").unwrap();
        assert_eq!(doc.node(ul).children.len(), 2);
    }

    #[test]
    fn script_content_is_raw_text() {
        let doc = Document::parse(b"<script>if (a<b) { x = '<div>'; }</script><p>t</p>");
        assert_eq!(names(&doc), vec!["script", "p"]);
        assert_eq!(doc.text_content(doc.root(), &[]), "t");
    }

    #[test]
    fn comments_doctype_and_stray_end_tags_ignored() {
        let doc = Document::parse(b"<!DOCTYPE html><!-- <b>no</b> --></span><i>x</i>");
        assert_eq!(names(&doc), vec!["i"]);
    }

    #[test]
    fn invalid_utf8_is_replaced() {
        let doc = Document::parse(b"<p>caf\xe9</p>");
        assert_eq!(doc.text_content(0, &[]), "caf\u{fffd}");
    }

    #[test]
    fn void_and_self_closing_do_not_nest() {
        let doc = Document::parse(b"<p>a<br>b<img src=x><svg><path/><path/></svg></p>");
        let p = doc.first_named("p").unwrap();
        assert_eq!(doc.node(p).children.len(), 5);
        assert_eq!(doc.elements_named("path").count(), 2);
    }

    #[test]
    fn table_cells_close_implicitly() {
        let doc = Document::parse(b"<table><tr><td>a<td>b<tr><td>c</table>");
        assert_eq!(doc.elements_named("tr").count(), 2);
        assert_eq!(doc.elements_named("td").count(), 3);
        let tr = doc.first_named("tr").unwrap();
        assert_eq!(doc.node(tr).children.len(), 2);
    }

    #[test]
    fn serialize_roundtrip_is_stable() {
        let src = "<html><body><p class=\"a\">x &amp; y<p>z<div>q</div></body></html>";
        let doc = Document::parse_str(src);
        let again = Document::parse_str(&doc.to_html());
        assert_eq!(doc, again);
    }

    #[test]
    fn garbage_never_panics() {
        for s in ["<", "<<>>", "</", "<a href=\"x", "<!--", "<p <p>", "&#99999999999;", "<a/b>"] {
            let _ = Document::parse_str(s);
        }
    }
}
