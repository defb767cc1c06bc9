#pragma once

// Bit sources fetched over HTTP(S). The response body is cached on disk and
// reused on every later run, so a fetched run replays exactly.

#include "normwalk/bits.hpp"

#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <string>

namespace normwalk::tools {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

inline SplitUrl split_url(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos || scheme == 0)
    throw std::invalid_argument("URL needs a scheme: " + url);
  const std::string s = url.substr(0, scheme);
  if (s != "http" && s != "https") throw std::invalid_argument("unsupported URL scheme: " + s);
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

/// Reads cache_path if it exists; otherwise GETs url, stores the body there
/// and uses it. The body bytes are taken as-is.
inline BitSource fetch_bits(const std::string& url, const std::string& cache_path,
                            int timeout_seconds = 30) {
  std::vector<std::uint8_t> bytes;
  if (std::filesystem::exists(cache_path)) {
    std::ifstream in(cache_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read fetch cache: " + cache_path);
    bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    const auto [origin, path] = split_url(url);
    httplib::Client client(origin);
    client.set_follow_location(true);
    client.set_connection_timeout(timeout_seconds);
    client.set_read_timeout(timeout_seconds);
    auto res = client.Get(path);
    if (!res) throw std::runtime_error("fetch failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
      throw std::runtime_error("fetch failed: HTTP " + std::to_string(res->status) + " from " + url);
    if (res->body.empty()) throw std::runtime_error("fetch returned an empty body: " + url);
    std::ofstream out(cache_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write fetch cache: " + cache_path);
    out.write(res->body.data(), static_cast<std::streamsize>(res->body.size()));
    bytes.assign(res->body.begin(), res->body.end());
  }
  return BitSource(std::move(bytes), BitSource::Origin::http_fetcher, url);
}

}  // namespace normwalk::tools
