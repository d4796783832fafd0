//! Benchmark harness for gme-core; see benches/.
