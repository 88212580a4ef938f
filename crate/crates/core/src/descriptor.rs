//! VNF packages, VNF descriptors and NS descriptors.
//!
//! Descriptor documents are JSON. A VNFD carries the resource flavor, the
//! image reference and the connection points of one VNF; an NSD lists its
//! constituent VNFDs, the virtual links between their connection points and
//! the forwarding graph (a simple chain of VNFD ids).
//!
//! ```text
//! VNFD: { id, name, image_ref, flavor{name,vcpus,memory_mb,storage_gb},
//!         connection_points[], complexity_hint }
//! NSD:  { id, name, constituent_vnfds[], virtual_links[{name,endpoints[]}],
//!         forwarding_graph[] }
//! ```
//!
//! Virtual link endpoints are written `<vnfd-id>.<connection-point>`, split
//! at the first dot.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("missing field `{0}`")]
    MissingField(String),
    #[error("invalid value for `{field}`: {reason}")]
    InvalidValue { field: String, reason: String },
    #[error("unresolved reference `{0}`")]
    UnresolvedReference(String),
    #[error("duplicate forwarding graph entry `{0}`")]
    DuplicateGraphEntry(String),
}

impl DescriptorError {
    fn invalid(field: &str, reason: impl Into<String>) -> Self {
        DescriptorError::InvalidValue {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}

/// A bare resource vector: vCPUs, memory in MiB and storage in GiB.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Resources {
    pub vcpus: u64,
    pub memory_mb: u64,
    pub storage_gb: u64,
}

impl Resources {
    pub const ZERO: Resources = Resources {
        vcpus: 0,
        memory_mb: 0,
        storage_gb: 0,
    };

    pub const fn new(vcpus: u64, memory_mb: u64, storage_gb: u64) -> Self {
        Resources {
            vcpus,
            memory_mb,
            storage_gb,
        }
    }

    /// Dimensions in a fixed order: vcpus, memory, storage.
    pub fn dims(&self) -> [u64; 3] {
        [self.vcpus, self.memory_mb, self.storage_gb]
    }

    /// True when `demand` fits in `self` on every dimension.
    pub fn admits(&self, demand: &Resources) -> bool {
        self.vcpus >= demand.vcpus
            && self.memory_mb >= demand.memory_mb
            && self.storage_gb >= demand.storage_gb
    }

    pub fn checked_sub(&self, other: &Resources) -> Option<Resources> {
        Some(Resources {
            vcpus: self.vcpus.checked_sub(other.vcpus)?,
            memory_mb: self.memory_mb.checked_sub(other.memory_mb)?,
            storage_gb: self.storage_gb.checked_sub(other.storage_gb)?,
        })
    }

    pub fn saturating_add(&self, other: &Resources) -> Resources {
        Resources {
            vcpus: self.vcpus.saturating_add(other.vcpus),
            memory_mb: self.memory_mb.saturating_add(other.memory_mb),
            storage_gb: self.storage_gb.saturating_add(other.storage_gb),
        }
    }
}

impl std::iter::Sum for Resources {
    fn sum<I: Iterator<Item = Resources>>(iter: I) -> Self {
        iter.fold(Resources::ZERO, |acc, r| acc.saturating_add(&r))
    }
}

/// Named resource flavor, e.g. `m1.medium`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceFlavor {
    pub name: String,
    pub vcpus: u64,
    pub memory_mb: u64,
    pub storage_gb: u64,
}

impl ResourceFlavor {
    pub fn new(name: impl Into<String>, vcpus: u64, memory_mb: u64, storage_gb: u64) -> Self {
        ResourceFlavor {
            name: name.into(),
            vcpus,
            memory_mb,
            storage_gb,
        }
    }

    pub fn resources(&self) -> Resources {
        Resources::new(self.vcpus, self.memory_mb, self.storage_gb)
    }

    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.vcpus < 1 {
            out.push(Violation::FlavorViolation {
                field: "vcpus".into(),
            });
        }
        if self.memory_mb < 1 {
            out.push(Violation::FlavorViolation {
                field: "memory_mb".into(),
            });
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Value")]
pub struct VnfDescriptor {
    pub id: String,
    pub name: String,
    pub image_ref: String,
    pub flavor: ResourceFlavor,
    pub connection_points: Vec<String>,
    /// Number of internal services; drives the simulator's configuration delay.
    pub complexity_hint: u32,
}

impl TryFrom<Value> for VnfDescriptor {
    type Error = DescriptorError;

    fn try_from(value: Value) -> Result<Self, Self::Error> {
        vnfd_from_value(&value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VirtualLink {
    pub name: String,
    pub endpoints: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NsDescriptor {
    pub id: String,
    pub name: String,
    pub constituent_vnfds: Vec<String>,
    pub virtual_links: Vec<VirtualLink>,
    pub forwarding_graph: Vec<String>,
}

impl NsDescriptor {
    /// Constituents in deployment order: forwarding graph first, then any
    /// constituent not on the graph in declaration order.
    pub fn deployment_order(&self) -> Vec<&str> {
        let mut order: Vec<&str> = self.forwarding_graph.iter().map(String::as_str).collect();
        for id in &self.constituent_vnfds {
            if !order.contains(&id.as_str()) {
                order.push(id);
            }
        }
        order
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ImageFormat {
    #[serde(rename = "QCOW2")]
    Qcow2,
    #[serde(rename = "RAW")]
    Raw,
}

impl fmt::Display for ImageFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImageFormat::Qcow2 => f.write_str("QCOW2"),
            ImageFormat::Raw => f.write_str("RAW"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Value")]
pub struct VnfPackage {
    pub vnfd: VnfDescriptor,
    pub image_name: String,
    pub image_size_mb: u64,
    pub image_format: ImageFormat,
}

impl TryFrom<Value> for VnfPackage {
    type Error = DescriptorError;

    fn try_from(value: Value) -> Result<Self, Self::Error> {
        package_from_value(&value)
    }
}

/// A package-compliance problem. Violations are data, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation")]
pub enum Violation {
    SizeViolation { image_size_mb: u64 },
    FlavorViolation { field: String },
    ComplexityViolation,
    DuplicateConnectionPoint { name: String },
}

pub type ValidationReport = Vec<Violation>;

fn parse_json(text: &str) -> Result<Value, DescriptorError> {
    serde_json::from_str(text).map_err(|e| DescriptorError::MalformedDocument(e.to_string()))
}

fn as_object<'a>(value: &'a Value, what: &str) -> Result<&'a Map<String, Value>, DescriptorError> {
    value
        .as_object()
        .ok_or_else(|| DescriptorError::MalformedDocument(format!("{what} must be a JSON object")))
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, DescriptorError> {
    obj.get(key)
        .ok_or_else(|| DescriptorError::MissingField(join(path, key)))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn text(obj: &Map<String, Value>, path: &str, key: &str) -> Result<String, DescriptorError> {
    field(obj, path, key)?
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| DescriptorError::invalid(&join(path, key), "expected a string"))
}

fn count(obj: &Map<String, Value>, path: &str, key: &str) -> Result<u64, DescriptorError> {
    field(obj, path, key)?
        .as_u64()
        .ok_or_else(|| DescriptorError::invalid(key, "expected a non-negative integer"))
}

fn text_list(
    obj: &Map<String, Value>,
    path: &str,
    key: &str,
    required: bool,
) -> Result<Vec<String>, DescriptorError> {
    let Some(value) = obj.get(key) else {
        return if required {
            Err(DescriptorError::MissingField(join(path, key)))
        } else {
            Ok(Vec::new())
        };
    };
    let items = value
        .as_array()
        .ok_or_else(|| DescriptorError::invalid(&join(path, key), "expected an array"))?;
    items
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| DescriptorError::invalid(&join(path, key), "expected strings"))
        })
        .collect()
}

fn vnfd_from_value(value: &Value) -> Result<VnfDescriptor, DescriptorError> {
    let obj = as_object(value, "VNFD")?;
    let id = text(obj, "", "id")?;
    if id.is_empty() {
        return Err(DescriptorError::invalid("id", "must not be empty"));
    }
    let name = text(obj, "", "name")?;
    let image_ref = text(obj, "", "image_ref")?;

    let flavor_obj = as_object(field(obj, "", "flavor")?, "flavor")?;
    let flavor = ResourceFlavor {
        name: text(flavor_obj, "flavor", "name")?,
        vcpus: count(flavor_obj, "flavor", "vcpus")?,
        memory_mb: count(flavor_obj, "flavor", "memory_mb")?,
        storage_gb: count(flavor_obj, "flavor", "storage_gb")?,
    };
    if flavor.vcpus < 1 {
        return Err(DescriptorError::invalid("vcpus", "must be at least 1"));
    }
    if flavor.memory_mb < 1 {
        return Err(DescriptorError::invalid("memory_mb", "must be at least 1"));
    }

    let connection_points = text_list(obj, "", "connection_points", false)?;
    let mut seen = BTreeSet::new();
    for cp in &connection_points {
        if !seen.insert(cp.as_str()) {
            return Err(DescriptorError::invalid(
                "connection_points",
                format!("duplicate name `{cp}`"),
            ));
        }
    }

    let complexity_hint = match obj.get("complexity_hint") {
        None => 1,
        Some(v) => {
            let hint = v
                .as_u64()
                .ok_or_else(|| DescriptorError::invalid("complexity_hint", "expected an integer"))?;
            if hint < 1 || hint > u64::from(u32::MAX) {
                return Err(DescriptorError::invalid("complexity_hint", "must be at least 1"));
            }
            hint as u32
        }
    };

    Ok(VnfDescriptor {
        id,
        name,
        image_ref,
        flavor,
        connection_points,
        complexity_hint,
    })
}

fn package_from_value(value: &Value) -> Result<VnfPackage, DescriptorError> {
    let obj = as_object(value, "package")?;
    let vnfd = vnfd_from_value(field(obj, "", "vnfd")?)?;
    let image_name = text(obj, "", "image_name")?;
    let image_size_mb = count(obj, "", "image_size_mb")?;
    let image_format = match field(obj, "", "image_format")?.as_str() {
        Some("QCOW2") => ImageFormat::Qcow2,
        Some("RAW") => ImageFormat::Raw,
        _ => {
            return Err(DescriptorError::invalid(
                "image_format",
                "expected \"QCOW2\" or \"RAW\"",
            ))
        }
    };
    Ok(VnfPackage {
        vnfd,
        image_name,
        image_size_mb,
        image_format,
    })
}

/// Parses a VNFD document.
pub fn parse_vnfd(text: &str) -> Result<VnfDescriptor, DescriptorError> {
    vnfd_from_value(&parse_json(text)?)
}

/// Parses a VNF package document: `{ vnfd, image_name, image_size_mb, image_format }`.
///
/// The image size is not checked here; [`validate_package`] reports it.
pub fn parse_package(text: &str) -> Result<VnfPackage, DescriptorError> {
    package_from_value(&parse_json(text)?)
}

/// Parses an NSD document, resolving every reference against `known_vnfds`.
pub fn parse_nsd(text: &str, known_vnfds: &[VnfDescriptor]) -> Result<NsDescriptor, DescriptorError> {
    nsd_from_value(&parse_json(text)?, known_vnfds)
}

pub fn nsd_from_value(value: &Value, known_vnfds: &[VnfDescriptor]) -> Result<NsDescriptor, DescriptorError> {
    let obj = as_object(value, "NSD")?;
    let id = text(obj, "", "id")?;
    let name = text(obj, "", "name")?;
    let constituent_vnfds = text_list(obj, "", "constituent_vnfds", true)?;
    let forwarding_graph = text_list(obj, "", "forwarding_graph", false)?;

    let mut virtual_links = Vec::new();
    if let Some(links) = obj.get("virtual_links") {
        let links = links
            .as_array()
            .ok_or_else(|| DescriptorError::invalid("virtual_links", "expected an array"))?;
        for link in links {
            let link = as_object(link, "virtual link")?;
            virtual_links.push(VirtualLink {
                name: text(link, "virtual_links", "name")?,
                endpoints: text_list(link, "virtual_links", "endpoints", true)?,
            });
        }
    }

    let nsd = NsDescriptor {
        id,
        name,
        constituent_vnfds,
        virtual_links,
        forwarding_graph,
    };
    resolve_nsd(&nsd, known_vnfds)?;
    Ok(nsd)
}

/// Checks every NSD reference against `known_vnfds`.
pub fn resolve_nsd(nsd: &NsDescriptor, known_vnfds: &[VnfDescriptor]) -> Result<(), DescriptorError> {
    let known: BTreeMap<&str, &VnfDescriptor> =
        known_vnfds.iter().map(|v| (v.id.as_str(), v)).collect();

    let mut constituents = BTreeSet::new();
    for id in &nsd.constituent_vnfds {
        if !known.contains_key(id.as_str()) {
            return Err(DescriptorError::UnresolvedReference(id.clone()));
        }
        constituents.insert(id.as_str());
    }

    let mut on_graph = BTreeSet::new();
    for id in &nsd.forwarding_graph {
        if !constituents.contains(id.as_str()) {
            return Err(DescriptorError::UnresolvedReference(id.clone()));
        }
        if !on_graph.insert(id.as_str()) {
            return Err(DescriptorError::DuplicateGraphEntry(id.clone()));
        }
    }

    for link in &nsd.virtual_links {
        for endpoint in &link.endpoints {
            let (vnfd_id, cp) = endpoint
                .split_once('.')
                .ok_or_else(|| DescriptorError::UnresolvedReference(endpoint.clone()))?;
            let vnfd = known
                .get(vnfd_id)
                .filter(|_| constituents.contains(vnfd_id))
                .ok_or_else(|| DescriptorError::UnresolvedReference(vnfd_id.to_string()))?;
            if !vnfd.connection_points.iter().any(|c| c == cp) {
                return Err(DescriptorError::UnresolvedReference(endpoint.clone()));
            }
        }
    }
    Ok(())
}

/// Checks a package against every descriptor invariant.
pub fn validate_package(pkg: &VnfPackage) -> ValidationReport {
    let mut out = Vec::new();
    if pkg.image_size_mb == 0 {
        out.push(Violation::SizeViolation {
            image_size_mb: pkg.image_size_mb,
        });
    }
    out.extend(pkg.vnfd.flavor.violations());
    if pkg.vnfd.complexity_hint < 1 {
        out.push(Violation::ComplexityViolation);
    }
    let mut seen = BTreeSet::new();
    for cp in &pkg.vnfd.connection_points {
        if !seen.insert(cp.as_str()) {
            out.push(Violation::DuplicateConnectionPoint { name: cp.clone() });
        }
    }
    out
}

pub fn vnfd_to_json(vnfd: &VnfDescriptor) -> String {
    serde_json::to_string_pretty(vnfd).expect("descriptor serializes")
}

pub fn nsd_to_json(nsd: &NsDescriptor) -> String {
    serde_json::to_string_pretty(nsd).expect("descriptor serializes")
}

pub fn package_to_json(pkg: &VnfPackage) -> String {
    serde_json::to_string_pretty(pkg).expect("package serializes")
}

/// Component names of the vCPE fixture, in forwarding-graph order.
pub const VCPE_COMPONENTS: [&str; 5] = ["vBNG", "vGDHCP", "vBRG", "vGMUX", "vInfra"];

/// Image size used by the fixture packages unless overridden.
pub const DEFAULT_IMAGE_SIZE_MB: u64 = 1024;

/// The five-component residential broadband vCPE: every component runs on
/// an `m1.medium` flavor (2 vCPU, 4096 MB, 40 GB). vBNG and vInfra carry a
/// complexity hint of 3, the rest 1.
pub fn builtin_vcpe() -> (NsDescriptor, Vec<VnfPackage>) {
    builtin_vcpe_with_image_size(DEFAULT_IMAGE_SIZE_MB)
}

pub fn builtin_vcpe_with_image_size(image_size_mb: u64) -> (NsDescriptor, Vec<VnfPackage>) {
    let packages: Vec<VnfPackage> = VCPE_COMPONENTS
        .iter()
        .map(|&name| {
            let slug = name.to_ascii_lowercase();
            VnfPackage {
                vnfd: VnfDescriptor {
                    id: name.to_string(),
                    name: name.to_string(),
                    image_ref: format!("vcpe-{slug}-image"),
                    flavor: ResourceFlavor::new("m1.medium", 2, 4096, 40),
                    connection_points: vec!["mgmt".into(), "ingress".into(), "egress".into()],
                    complexity_hint: if matches!(name, "vBNG" | "vInfra") { 3 } else { 1 },
                },
                image_name: format!("vcpe-{slug}.qcow2"),
                image_size_mb,
                image_format: ImageFormat::Qcow2,
            }
        })
        .collect();

    let mut virtual_links = vec![VirtualLink {
        name: "mgmt-net".into(),
        endpoints: VCPE_COMPONENTS.iter().map(|c| format!("{c}.mgmt")).collect(),
    }];
    for pair in VCPE_COMPONENTS.windows(2) {
        virtual_links.push(VirtualLink {
            name: format!("vl-{}-{}", pair[0], pair[1]),
            endpoints: vec![format!("{}.egress", pair[0]), format!("{}.ingress", pair[1])],
        });
    }

    let nsd = NsDescriptor {
        id: "vcpe-ns".into(),
        name: "Residential Broadband vCPE".into(),
        constituent_vnfds: VCPE_COMPONENTS.iter().map(|c| c.to_string()).collect(),
        virtual_links,
        forwarding_graph: VCPE_COMPONENTS.iter().map(|c| c.to_string()).collect(),
    };
    (nsd, packages)
}

#[cfg(test)]
mod tests {
    use super::*;

    const VBNG: &str = r#"{
        "id": "vBNG", "name": "vBNG", "image_ref": "vbng-img",
        "flavor": {"name": "m1.medium", "vcpus": 2, "memory_mb": 4096, "storage_gb": 40},
        "connection_points": ["mgmt", "egress"],
        "complexity_hint": 3
    }"#;

    #[test]
    fn parses_vbng_flavor() {
        let vnfd = parse_vnfd(VBNG).unwrap();
        assert_eq!(vnfd.flavor, ResourceFlavor::new("m1.medium", 2, 4096, 40));
        assert_eq!(vnfd.complexity_hint, 3);
        assert_eq!(vnfd.connection_points, vec!["mgmt", "egress"]);
    }

    #[test]
    fn zero_vcpus_is_invalid() {
        let doc = VBNG.replace("\"vcpus\": 2", "\"vcpus\": 0");
        match parse_vnfd(&doc) {
            Err(DescriptorError::InvalidValue { field, .. }) => assert_eq!(field, "vcpus"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn minimal_document_defaults() {
        let doc = r#"{"id":"m","name":"m","image_ref":"i",
            "flavor":{"name":"tiny","vcpus":1,"memory_mb":1,"storage_gb":0}}"#;
        let vnfd = parse_vnfd(doc).unwrap();
        assert_eq!(vnfd.complexity_hint, 1);
        assert!(vnfd.connection_points.is_empty());
        assert_eq!(vnfd.flavor.storage_gb, 0);
    }

    #[test]
    fn missing_field_is_named() {
        let doc = r#"{"id":"m","name":"m","image_ref":"i",
            "flavor":{"name":"tiny","memory_mb":1,"storage_gb":0}}"#;
        assert_eq!(
            parse_vnfd(doc),
            Err(DescriptorError::MissingField("flavor.vcpus".into()))
        );
        assert!(matches!(
            parse_vnfd("{not json"),
            Err(DescriptorError::MalformedDocument(_))
        ));
    }

    #[test]
    fn duplicate_connection_points_rejected() {
        let doc = VBNG.replace("[\"mgmt\", \"egress\"]", "[\"mgmt\", \"mgmt\"]");
        assert!(matches!(
            parse_vnfd(&doc),
            Err(DescriptorError::InvalidValue { field, .. }) if field == "connection_points"
        ));
    }

    #[test]
    fn vcpe_nsd_parses_against_fixture() {
        let (nsd, pkgs) = builtin_vcpe();
        let known: Vec<_> = pkgs.iter().map(|p| p.vnfd.clone()).collect();
        let parsed = parse_nsd(&nsd_to_json(&nsd), &known).unwrap();
        assert_eq!(parsed, nsd);
        assert_eq!(parsed.forwarding_graph.len(), 5);
    }

    #[test]
    fn unknown_constituent_unresolved() {
        let (_, pkgs) = builtin_vcpe();
        let known: Vec<_> = pkgs.iter().map(|p| p.vnfd.clone()).collect();
        let doc = r#"{"id":"ns","name":"ns","constituent_vnfds":["vBNG","vFW"],"forwarding_graph":[]}"#;
        assert_eq!(
            parse_nsd(doc, &known),
            Err(DescriptorError::UnresolvedReference("vFW".into()))
        );
    }

    #[test]
    fn unknown_connection_point_unresolved() {
        let (_, pkgs) = builtin_vcpe();
        let known: Vec<_> = pkgs.iter().map(|p| p.vnfd.clone()).collect();
        let doc = r#"{"id":"ns","name":"ns","constituent_vnfds":["vBNG"],
            "virtual_links":[{"name":"l","endpoints":["vBNG.wan"]}]}"#;
        assert_eq!(
            parse_nsd(doc, &known),
            Err(DescriptorError::UnresolvedReference("vBNG.wan".into()))
        );
    }

    #[test]
    fn duplicate_graph_entry() {
        let (_, pkgs) = builtin_vcpe();
        let known: Vec<_> = pkgs.iter().map(|p| p.vnfd.clone()).collect();
        let doc = r#"{"id":"ns","name":"ns","constituent_vnfds":["vBNG","vBRG"],
            "forwarding_graph":["vBNG","vBRG","vBNG"]}"#;
        assert_eq!(
            parse_nsd(doc, &known),
            Err(DescriptorError::DuplicateGraphEntry("vBNG".into()))
        );
    }

    #[test]
    fn empty_nsd_is_valid() {
        let doc = r#"{"id":"ns","name":"empty","constituent_vnfds":[],"virtual_links":[],"forwarding_graph":[]}"#;
        let nsd = parse_nsd(doc, &[]).unwrap();
        assert!(nsd.constituent_vnfds.is_empty());
        assert!(nsd.deployment_order().is_empty());
    }

    #[test]
    fn fixture_matches_table_rows() {
        let (nsd, pkgs) = builtin_vcpe();
        assert_eq!(nsd.constituent_vnfds.len(), 5);
        assert_eq!(nsd.forwarding_graph, VCPE_COMPONENTS);
        for p in &pkgs {
            assert_eq!(p.vnfd.flavor, ResourceFlavor::new("m1.medium", 2, 4096, 40));
            assert_eq!(p.image_size_mb, 1024);
            assert!(validate_package(p).is_empty());
        }
        let total: Resources = pkgs.iter().map(|p| p.vnfd.flavor.resources()).sum();
        assert_eq!(total, Resources::new(10, 20480, 200));
        let hints: Vec<_> = pkgs.iter().map(|p| p.vnfd.complexity_hint).collect();
        assert_eq!(hints, vec![3, 1, 1, 1, 3]);
    }

    #[test]
    fn package_validation() {
        let (_, pkgs) = builtin_vcpe();
        let mut pkg = pkgs[0].clone();
        assert_eq!(validate_package(&pkg), vec![]);
        pkg.image_format = ImageFormat::Raw;
        assert_eq!(validate_package(&pkg), vec![]);
        pkg.image_size_mb = 0;
        assert_eq!(
            validate_package(&pkg),
            vec![Violation::SizeViolation { image_size_mb: 0 }]
        );
    }

    #[test]
    fn package_document_round_trips() {
        let (_, pkgs) = builtin_vcpe();
        let text = package_to_json(&pkgs[4]);
        assert_eq!(parse_package(&text).unwrap(), pkgs[4]);
        let back: VnfPackage = serde_json::from_str(&text).unwrap();
        assert_eq!(back, pkgs[4]);
    }
}
