//! Parse, validate and resolve descriptor documents.

use manobench::descriptor::{
    builtin_vcpe, package_to_json, parse_nsd, parse_package, parse_vnfd, validate_package, DescriptorError,
};

const VFW: &str = r#"{
    "id": "vFW", "name": "vFW", "image_ref": "vfw-image",
    "flavor": {"name": "m1.small", "vcpus": 1, "memory_mb": 2048, "storage_gb": 20},
    "connection_points": ["mgmt", "wan", "lan"],
    "complexity_hint": 2
}"#;

fn main() -> Result<(), DescriptorError> {
    let vfw = parse_vnfd(VFW)?;
    println!("{} needs {:?}", vfw.name, vfw.flavor.resources());

    let (nsd, packages) = builtin_vcpe();
    println!("{} ({}): {}", nsd.name, nsd.id, nsd.deployment_order().join(" -> "));
    for p in &packages {
        let back = parse_package(&package_to_json(p))?;
        assert_eq!(&back, p);
        println!(
            "  {:<7} {} vCPU {:>5} MB {:>3} GB hint {} violations {:?}",
            p.vnfd.name,
            p.vnfd.flavor.vcpus,
            p.vnfd.flavor.memory_mb,
            p.vnfd.flavor.storage_gb,
            p.vnfd.complexity_hint,
            validate_package(p)
        );
    }

    let mut known: Vec<_> = packages.iter().map(|p| p.vnfd.clone()).collect();
    let edge = r#"{"id": "edge", "name": "edge", "constituent_vnfds": ["vFW", "vBNG"],
        "virtual_links": [{"name": "uplink", "endpoints": ["vFW.lan", "vBNG.ingress"]}],
        "forwarding_graph": ["vFW", "vBNG"]}"#;
    match parse_nsd(edge, &known) {
        Err(e) => println!("before vFW is known: {e}"),
        Ok(_) => unreachable!(),
    }
    known.push(vfw);
    let ns = parse_nsd(edge, &known)?;
    println!("after: {} links, graph {:?}", ns.virtual_links.len(), ns.forwarding_graph);
    Ok(())
}
