//! TimeML 1.2.1 parsing.
//!
//! The document text is the character data inside the `<TEXT>` region (the
//! whole root when no such element exists), with line endings normalized to
//! `\n` before any offset is computed so spans are identical across
//! platforms. `EVENT` and `TIMEX3` elements become entities — those inside
//! the text region carry character spans, those outside (typically the
//! creation time) carry none. `MAKEINSTANCE` declarations map instance ids
//! (eiid) back to event ids, and `TLINK` elements become tlinks with their
//! `relType` parsed under the TimeML label convention.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use crate::model::{Document, Entity, EntityKind, TLink};
use crate::relations::{parse_relation, Convention};

use super::{file_stem, ReadError, ReaderWarning};

pub fn read_timeml(path: impl AsRef<Path>) -> Result<Document, ReadError> {
    read_timeml_with_warnings(path).map(|(doc, _)| doc)
}

/// Parse one TimeML file, reporting skipped-but-survivable irregularities:
/// tlinks pointing at unknown instances or entities, duplicate instance
/// declarations, self-referential tlinks, and extra creation times.
pub fn read_timeml_with_warnings(
    path: impl AsRef<Path>,
) -> Result<(Document, Vec<ReaderWarning>), ReadError> {
    let path = path.as_ref();
    let raw = std::fs::read_to_string(path).map_err(|e| ReadError::io(path, e))?;
    let normalized = raw.replace("\r\n", "\n").replace('\r', "\n");
    parse_document(&normalized, &file_stem(path), path)
}

fn parse_document(
    xml: &str,
    name: &str,
    path: &Path,
) -> Result<(Document, Vec<ReaderWarning>), ReadError> {
    let tree = roxmltree::Document::parse(xml).map_err(|e| ReadError::Xml {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    let mut warnings = Vec::new();

    // The text region: first TEXT element, or the whole root for files that
    // inline their annotations directly.
    let region = tree
        .descendants()
        .find(|n| n.is_element() && n.tag_name().name() == "TEXT")
        .unwrap_or_else(|| tree.root_element());

    let mut text = String::new();
    let mut offset = 0usize;
    let mut spans: HashMap<roxmltree::NodeId, (usize, usize)> = HashMap::new();
    collect_text(region, &mut text, &mut offset, &mut spans);

    // Entities in document order; creation times split off separately.
    let mut dcts: Vec<Entity> = Vec::new();
    let mut entities: Vec<Entity> = Vec::new();
    for node in tree.descendants().filter(|n| n.is_element()) {
        let kind = match node.tag_name().name() {
            "EVENT" => EntityKind::Event,
            "TIMEX3" => EntityKind::Timex,
            _ => continue,
        };
        let id_attr = if kind == EntityKind::Event { "eid" } else { "tid" };
        let id = node.attribute(id_attr).ok_or_else(|| ReadError::Format {
            path: path.to_owned(),
            message: format!(
                "{} element without {} attribute",
                node.tag_name().name(),
                id_attr
            ),
        })?;
        let mut entity = Entity::new(id, kind, node_text(node));
        if let Some(&(start, end)) = spans.get(&node.id()) {
            entity.span = Some((start, end));
        }
        for attr in node.attributes() {
            if attr.name() != id_attr {
                entity.attributes.insert(attr.name().to_owned(), attr.value().to_owned());
            }
        }
        if entity.is_creation_time() {
            dcts.push(entity);
        } else {
            entities.push(entity);
        }
    }
    let dct = match dcts.len() {
        0 => {
            return Err(ReadError::MissingCreationTime {
                path: path.to_owned(),
            })
        }
        1 => dcts.remove(0),
        n => {
            warnings.push(ReaderWarning::new(
                name,
                format!("{n} creation-time timexes; keeping the first and treating the rest as plain timexes"),
            ));
            let first = dcts.remove(0);
            entities.extend(dcts);
            first
        }
    };

    // Instance declarations: eiid → eid.
    let mut instance_of: HashMap<&str, &str> = HashMap::new();
    let mut events_instanced: HashSet<&str> = HashSet::new();
    for node in tree
        .descendants()
        .filter(|n| n.is_element() && n.tag_name().name() == "MAKEINSTANCE")
    {
        let (Some(eiid), Some(eid)) = (node.attribute("eiid"), node.attribute("eventID")) else {
            warnings.push(ReaderWarning::new(
                name,
                "MAKEINSTANCE without eiid and eventID skipped",
            ));
            continue;
        };
        if let Some(existing) = instance_of.get(eiid) {
            warnings.push(ReaderWarning::new(
                name,
                format!("duplicate MAKEINSTANCE for {eiid} (kept {existing}, ignored {eid})"),
            ));
            continue;
        }
        if !events_instanced.insert(eid) {
            warnings.push(ReaderWarning::new(
                name,
                format!("event {eid} has multiple instances; tlinks on any of them resolve to it"),
            ));
        }
        instance_of.insert(eiid, eid);
    }

    let known_ids: HashSet<&str> = entities
        .iter()
        .map(|e| e.id.as_str())
        .chain(std::iter::once(dct.id.as_str()))
        .collect();

    let mut tlinks = Vec::new();
    for node in tree
        .descendants()
        .filter(|n| n.is_element() && n.tag_name().name() == "TLINK")
    {
        let lid = node.attribute("lid").unwrap_or("<no lid>");
        let Some(source) = resolve_endpoint(
            node,
            &["eventInstanceID", "timeID", "eventID"],
            &instance_of,
        ) else {
            warnings.push(ReaderWarning::new(
                name,
                format!("TLINK {lid} has no source endpoint attribute; skipped"),
            ));
            continue;
        };
        let Some(target) = resolve_endpoint(
            node,
            &["relatedToEventInstance", "relatedToTime", "relatedToEvent"],
            &instance_of,
        ) else {
            warnings.push(ReaderWarning::new(
                name,
                format!("TLINK {lid} has no target endpoint attribute; skipped"),
            ));
            continue;
        };
        if let Some(id) = [source.as_str(), target.as_str()]
            .into_iter()
            .find(|id| !known_ids.contains(id))
        {
            warnings.push(ReaderWarning::new(
                name,
                format!("TLINK {lid} references unknown instance or entity {id:?}; skipped"),
            ));
            continue;
        }
        if source == target {
            warnings.push(ReaderWarning::new(
                name,
                format!("TLINK {lid} links {source:?} to itself; skipped"),
            ));
            continue;
        }
        let label = node.attribute("relType").ok_or_else(|| ReadError::Format {
            path: path.to_owned(),
            message: format!("TLINK {lid} has no relType"),
        })?;
        let relation =
            parse_relation(label, Convention::TimeML).map_err(|source| ReadError::Relation {
                context: format!("{} TLINK {lid}", path.display()),
                source,
            })?;

        let endpoint_attrs = [
            "lid",
            "relType",
            "eventInstanceID",
            "timeID",
            "eventID",
            "relatedToEventInstance",
            "relatedToTime",
            "relatedToEvent",
        ];
        let extra: BTreeMap<String, String> = node
            .attributes()
            .filter(|a| !endpoint_attrs.contains(&a.name()))
            .map(|a| (a.name().to_owned(), a.value().to_owned()))
            .collect();

        let mut tlink = TLink::new(source, target, relation).map_err(|source| ReadError::Model {
            path: path.to_owned(),
            source,
        })?;
        if let Some(lid) = node.attribute("lid") {
            tlink = tlink.with_id(lid);
        }
        tlinks.push(tlink.with_attributes(extra));
    }

    let doc = Document::new(name, text, dct, entities, tlinks).map_err(|source| {
        ReadError::Model {
            path: path.to_owned(),
            source,
        }
    })?;
    Ok((doc, warnings))
}

/// Walk the text region, accumulating character data and recording the
/// character span of every EVENT/TIMEX3 element passed through.
fn collect_text(
    node: roxmltree::Node,
    text: &mut String,
    offset: &mut usize,
    spans: &mut HashMap<roxmltree::NodeId, (usize, usize)>,
) {
    for child in node.children() {
        if child.is_text() {
            let data = child.text().unwrap_or("");
            text.push_str(data);
            *offset += data.chars().count();
        } else if child.is_element() {
            let annotated = matches!(child.tag_name().name(), "EVENT" | "TIMEX3");
            let start = *offset;
            collect_text(child, text, offset, spans);
            if annotated && *offset > start {
                spans.insert(child.id(), (start, *offset));
            }
        }
    }
}

/// Concatenated character data below a node.
fn node_text(node: roxmltree::Node) -> String {
    node.descendants()
        .filter(|n| n.is_text())
        .filter_map(|n| n.text())
        .collect()
}

/// First endpoint attribute present, with instance ids mapped to event ids.
/// `None` when no endpoint attribute exists at all; an undeclared instance
/// id passes through unchanged and fails the caller's known-id check.
fn resolve_endpoint(
    node: roxmltree::Node,
    attrs: &[&str; 3],
    instance_of: &HashMap<&str, &str>,
) -> Option<String> {
    for (i, attr) in attrs.iter().enumerate() {
        if let Some(value) = node.attribute(*attr) {
            return Some(if i == 0 {
                // Instance attribute: map eiid → eid, falling back to the
                // raw id (reported as unknown by the caller).
                instance_of.get(value).copied().unwrap_or(value).to_owned()
            } else {
                value.to_owned()
            });
        }
    }
    None
}
