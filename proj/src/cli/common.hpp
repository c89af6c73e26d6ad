#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

namespace jigsolve::cli {

using Json = nlohmann::ordered_json;

// Raised for flag combinations CLI11 cannot check by itself.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --threads, falling back to JIGSOLVE_THREADS, then 1.
inline int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("JIGSOLVE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

// Calls fn(i) for i in [begin, end) on up to `threads` workers. The first
// exception is rethrown after all workers stop.
inline void parallel_for(std::size_t begin, std::size_t end, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || end - begin <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{begin};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < end; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = end;
      }
    }
  };
  std::vector<std::thread> pool;
  const auto count = static_cast<std::size_t>(threads);
  for (std::size_t t = 0; t < std::min(count, end - begin); ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Line-delimited JSON sink; every record is flushed so an interrupted run
// leaves a parseable prefix.
class ReportWriter {
 public:
  explicit ReportWriter(const std::string& path) : out_(path, std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot write report " + path);
  }
  void write(const Json& record) {
    out_ << record.dump() << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};


}  // namespace jigsolve::cli
