//! Serves canned chat completions on a local port so the `omega` binary
//! can be tried end to end without a model.
//!
//!     cargo run --example mock_endpoint
//!     # in another shell, with endpoint_url set to the printed address:
//!     omega --config mock.toml generate --fixture data/sample/commit.json
//!
//! Stops after `--seconds N` (default: runs until killed).

use std::time::{Duration, Instant};

use omega::llm::mock::MockServer;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let limit = match args.as_slice() {
        [] => None,
        [flag, n] if flag == "--seconds" => Some(Duration::from_secs(n.parse()?)),
        _ => return Err("usage: mock_endpoint [--seconds N]".into()),
    };
    let server = MockServer::canned()?;
    println!("endpoint_url = \"{}\"", server.url());

    let start = Instant::now();
    let mut seen = 0;
    while limit.is_none_or(|l| start.elapsed() < l) {
        std::thread::sleep(Duration::from_millis(200));
        for r in server.requests().iter().skip(seen) {
            let site = r
                .chat_request()
                .and_then(|c| c.messages.first().map(|m| m.content.chars().take(60).collect::<String>()))
                .unwrap_or_default();
            eprintln!("{} {} :: {site}", r.method, r.path);
        }
        seen = server.request_count();
    }
    Ok(())
}
