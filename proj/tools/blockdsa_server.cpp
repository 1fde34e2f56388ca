/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "blockdsa/service_http.hpp"

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : std::move(fallback);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HTTP run service for block programs", "blockdsa-server"};
  std::string addr = env_or("BLOCKDSA_ADDR", "127.0.0.1:8080");
  long ttl_seconds = std::stol(env_or("BLOCKDSA_SESSION_TTL", "900"));
  app.add_option("--addr", addr, "host:port to listen on (env BLOCKDSA_ADDR)")->capture_default_str();
  app.add_option("--ttl", ttl_seconds, "Idle session lifetime in seconds (env BLOCKDSA_SESSION_TTL)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "--addr must look like host:port\n";
    return 1;
  }
  const std::string host = addr.substr(0, colon);
  const int port = std::stoi(addr.substr(colon + 1));

  blockdsa::RunService::Config cfg;
  cfg.session_ttl = std::chrono::seconds(ttl_seconds);
  blockdsa::RunService service(cfg);
  httplib::Server server;
  blockdsa::mount(server, service);

  std::cerr << "blockdsa-server listening on " << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "cannot listen on " << addr << "\n";
    return 1;
  }
  return 0;
}
