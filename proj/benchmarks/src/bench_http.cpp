#include <string>

#include <benchmark/benchmark.h>

#include "algsim/dpi_http.hpp"
#include "algsim/http_message.hpp"

namespace {

std::string sample_request(std::size_t body_size) {
  std::string body(body_size, 'x');
  std::string req = "POST /upload HTTP/1.1\r\n";
  req += "Host: alg\r\n";
  req += "Content-Type: application/octet-stream\r\n";
  req += "Content-Length: " + std::to_string(body.size()) + "\r\n";
  req += "\r\n";
  req += body;
  return req;
}

void BM_ParseRequest(benchmark::State& state) {
  const std::string bytes = sample_request(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    algsim::HttpMessage msg = algsim::parse_http_request(bytes);
    benchmark::DoNotOptimize(msg.body.size());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_ParseRequest)->Range(16, 65536);

void BM_NormalizeRequest(benchmark::State& state) {
  const std::string bytes = sample_request(static_cast<std::size_t>(state.range(0)));
  const algsim::HttpMessage msg = algsim::parse_http_request(bytes);
  for (auto _ : state) {
    algsim::HttpReject why{0, ""};
    auto norm = algsim::normalize(msg, algsim::HeaderMode::LastWins, &why);
    benchmark::DoNotOptimize(norm.has_value());
  }
}
BENCHMARK(BM_NormalizeRequest)->Range(16, 65536);

}  // namespace
