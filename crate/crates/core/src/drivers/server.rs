use std::net::SocketAddr;
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;

use log::{debug, warn};
use serde::Serialize;
use tiny_http::{Header, Method, Request, Response, Server};

use std::collections::BTreeMap;

use super::wire::{
    rfc3339, CreateNs, Created, ErrorBody, Measure, NsView, OpAccepted, OpView, PackageView, ScaleRequest, VnfAction,
    SCALE_OUT,
};
use crate::descriptor::parse_package;
use crate::mano::{ManoError, Orchestrator};
use crate::nfvi::Metric;

#[derive(Debug, Clone)]
pub struct ServeConfig {
    /// `host:port`; port 0 picks a free port.
    pub bind: String,
    /// Required in `X-Auth-Token` when set.
    pub auth_token: Option<String>,
    pub workers: usize,
}

impl Default for ServeConfig {
    fn default() -> Self {
        ServeConfig {
            bind: "127.0.0.1:0".into(),
            auth_token: None,
            workers: 4,
        }
    }
}

/// A running NBI server. Requests are served concurrently but commands are
/// applied to the orchestrator one at a time.
pub struct NbiServer {
    server: Arc<Server>,
    addr: SocketAddr,
    workers: Vec<JoinHandle<()>>,
    orch: Arc<Mutex<Orchestrator>>,
}

impl NbiServer {
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }

    pub fn orchestrator(&self) -> Arc<Mutex<Orchestrator>> {
        Arc::clone(&self.orch)
    }

    /// Blocks until the workers exit (they only exit on `shutdown`).
    pub fn join(mut self) {
        for w in self.workers.drain(..) {
            let _ = w.join();
        }
    }

    pub fn shutdown(mut self) {
        for _ in &self.workers {
            self.server.unblock();
        }
        for w in self.workers.drain(..) {
            let _ = w.join();
        }
    }
}

pub fn nbi_serve(orch: Orchestrator, cfg: ServeConfig) -> std::io::Result<NbiServer> {
    let server = Server::http(&cfg.bind).map_err(|e| std::io::Error::other(e.to_string()))?;
    let addr = server
        .server_addr()
        .to_ip()
        .ok_or_else(|| std::io::Error::other("server is not bound to an IP address"))?;
    let server = Arc::new(server);
    let orch = Arc::new(Mutex::new(orch));
    let workers = (0..cfg.workers.max(1))
        .map(|_| {
            let server = Arc::clone(&server);
            let orch = Arc::clone(&orch);
            let token = cfg.auth_token.clone();
            std::thread::spawn(move || {
                while let Ok(req) = server.recv() {
                    handle(req, &orch, token.as_deref());
                }
            })
        })
        .collect();
    Ok(NbiServer {
        server,
        addr,
        workers,
        orch,
    })
}

type Reply = (u16, String);

fn json<T: Serialize>(status: u16, body: &T) -> Reply {
    (status, serde_json::to_string(body).expect("wire types serialize"))
}

fn error(status: u16, kind: &str, message: impl Into<String>) -> Reply {
    json(
        status,
        &ErrorBody {
            error: kind.into(),
            message: message.into(),
        },
    )
}

fn mano_error(e: ManoError) -> Reply {
    let (status, kind) = match &e {
        ManoError::UnknownNs(_)
        | ManoError::UnknownNsd(_)
        | ManoError::UnknownVnf(_)
        | ManoError::UnknownPackage(_)
        | ManoError::UnknownOperation(_)
        | ManoError::UnknownInstance(_)
        | ManoError::UnknownMetric(_) => (404, "NOT_FOUND"),
        ManoError::NoFeasibleNode
        | ManoError::MissingPackage(_)
        | ManoError::WrongState(_)
        | ManoError::PackageInUse(_) => (409, "CONFLICT"),
        ManoError::ValidationFailed(_) | ManoError::Descriptor(_) | ManoError::InvalidConfig(_) => {
            (400, "BAD_REQUEST")
        }
        ManoError::Sim(_) | ManoError::Kpi(_) => (500, "INTERNAL"),
    };
    error(status, kind, e.to_string())
}

fn handle(mut req: Request, orch: &Mutex<Orchestrator>, token: Option<&str>) {
    let authorized = token.is_none_or(|t| {
        req.headers()
            .iter()
            .any(|h| h.field.equiv("X-Auth-Token") && h.value.as_str() == t)
    });
    let (status, body) = if !authorized {
        error(401, "UNAUTHORIZED", "missing or wrong X-Auth-Token")
    } else {
        let mut body = String::new();
        match req.as_reader().read_to_string(&mut body) {
            Ok(_) => {
                let method = req.method().clone();
                let path = req.url().split('?').next().unwrap_or("").to_string();
                let mut orch = orch.lock().unwrap_or_else(|p| p.into_inner());
                route(&method, &path, &body, &mut orch)
            }
            Err(e) => error(400, "BAD_REQUEST", e.to_string()),
        }
    };
    debug!("{} {} -> {status}", req.method(), req.url());
    let header = Header::from_bytes(&b"Content-Type"[..], &b"application/json"[..]).expect("static header");
    let response = Response::from_string(body).with_status_code(status).with_header(header);
    if let Err(e) = req.respond(response) {
        warn!("failed to send response: {e}");
    }
}

fn parse_body<T: serde::de::DeserializeOwned>(body: &str) -> Result<T, Reply> {
    serde_json::from_str(body).map_err(|e| error(400, "BAD_REQUEST", e.to_string()))
}

fn route(method: &Method, path: &str, body: &str, orch: &mut Orchestrator) -> Reply {
    let segs: Vec<&str> = path.trim_matches('/').split('/').collect();
    let result: Result<Reply, Reply> = (|| match (method, segs.as_slice()) {
        (Method::Post, ["packages"]) => {
            let pkg = parse_package(body).map_err(|e| error(400, "BAD_REQUEST", e.to_string()))?;
            let out = orch.onboard(pkg).map_err(mano_error)?;
            Ok(json(
                201,
                &Created {
                    id: out.package_id,
                    instance_id: Some(out.instance_id),
                    op_id: Some(out.op_id),
                },
            ))
        }
        (Method::Get, ["packages", id]) => {
            let p = orch.package_status(id).map_err(mano_error)?;
            Ok(json(200, &PackageView::from(p)))
        }
        (Method::Delete, ["packages", id]) => {
            orch.delete_package(id).map_err(mano_error)?;
            Ok((204, String::new()))
        }
        (Method::Post, ["ns_descriptors"]) => {
            let id = orch.register_nsd_document(body).map_err(mano_error)?;
            Ok(json(201, &Created { id, instance_id: None, op_id: None }))
        }
        (Method::Post, ["ns_instances"]) => {
            let req: CreateNs = parse_body(body)?;
            let id = orch.create_ns(&req.nsd_id).map_err(mano_error)?;
            Ok(json(201, &Created { id, instance_id: None, op_id: None }))
        }
        (Method::Get, ["ns_instances", id]) => {
            let s = orch.ns_status(id).map_err(mano_error)?;
            Ok(json(200, &NsView::from(s)))
        }
        (Method::Post, ["ns_instances", id, "instantiate"]) => {
            let (op_id, _) = orch.instantiate(id).map_err(mano_error)?;
            Ok(json(202, &OpAccepted { op_id }))
        }
        (Method::Post, ["ns_instances", id, "scale"]) => {
            let req: ScaleRequest = parse_body(body)?;
            if req.kind != SCALE_OUT {
                return Err(error(400, "BAD_REQUEST", format!("unsupported scale kind `{}`", req.kind)));
            }
            let out = orch.scale_out(id, &req.vnf_name).map_err(mano_error)?;
            Ok(json(202, &OpAccepted { op_id: out.op_id }))
        }
        (Method::Post, ["ns_instances", id, "migrate"]) => {
            let req: VnfAction = parse_body(body)?;
            let out = orch.migrate(id, &req.vnf_name).map_err(mano_error)?;
            Ok(json(202, &OpAccepted { op_id: out.op_id }))
        }
        (Method::Delete, ["ns_instances", id]) => {
            orch.terminate_ns(id).map_err(mano_error)?;
            Ok((204, String::new()))
        }
        (Method::Get, ["operations", id]) => {
            let op = orch.operation(id).map_err(mano_error)?.clone();
            Ok(json(200, &OpView::from(op)))
        }
        (Method::Get, ["instances"]) => Ok(json(200, &orch.live_instances())),
        (Method::Get, ["instances", id, "metrics"]) => {
            orch.instance_metrics(id).map_err(mano_error)?;
            let units: BTreeMap<&str, &str> = Metric::ALL.iter().map(|m| (m.as_str(), m.unit())).collect();
            Ok(json(200, &units))
        }
        (Method::Get, ["metrics", id, "measures"]) => {
            let points: Vec<Measure> = orch
                .measures(id)
                .map_err(mano_error)?
                .into_iter()
                .map(|(t, value)| Measure(rfc3339(t), value))
                .collect();
            Ok(json(200, &points))
        }
        _ => Err(error(404, "NOT_FOUND", format!("no route for {method} {path}"))),
    })();
    result.unwrap_or_else(|e| e)
}
