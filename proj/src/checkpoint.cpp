#include "zetalab/checkpoint.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace zetalab::moment {
namespace {

constexpr int kChunkSegments = 50;

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s, const std::string& line) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || errno == ERANGE)
    throw Error(ErrorKind::parse_error, "bad number in checkpoint line: " + line);
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string config_digest(int k, const PrecisionContext& ctx, const QuadConfig& cfg) {
  std::ostringstream os;
  os << "k=" << k << ";bits=" << ctx.work_bits() << ";abs=" << g17(ctx.abs_tol()) << ";rel=" << g17(ctx.rel_tol())
     << ";nodes=" << cfg.nodes << ";panel_fraction=" << g17(cfg.panel_fraction)
     << ";max_panel=" << g17(cfg.max_panel) << ";max_depth=" << cfg.max_depth << ";rel_tol=" << g17(cfg.rel_tol)
     << ";segment=" << g17(cfg.segment) << ";crossover=" << g17(cfg.zeta.crossover)
     << ";rs_terms=" << cfg.zeta.rs_terms;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_record(const CheckpointRecord& r) {
  return std::to_string(r.k) + "," + g17(r.T) + "," + g17(r.value) + "," + g17(r.err) + "," + r.digest;
}

CheckpointRecord parse_record(const std::string& line) {
  std::vector<std::string> f;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) f.push_back(trim(cur));
  if (f.size() != 5) throw Error(ErrorKind::parse_error, "checkpoint line needs 5 fields: " + line);
  CheckpointRecord r;
  char* end = nullptr;
  const long k = std::strtol(f[0].c_str(), &end, 10);
  if (f[0].empty() || *end != '\0') throw Error(ErrorKind::parse_error, "bad k in checkpoint line: " + line);
  r.k = static_cast<int>(k);
  r.T = parse_double(f[1], line);
  r.value = parse_double(f[2], line);
  r.err = parse_double(f[3], line);
  r.digest = f[4];
  return r;
}

MomentCheckpoint read_checkpoint(const std::string& path, int k, const std::string& digest) {
  MomentCheckpoint cp;
  cp.k = k;
  cp.digest = digest;
  std::ifstream in(path);
  if (!in) return cp;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (first) {
      first = false;
      if (line != kCheckpointHeader) throw Error(ErrorKind::parse_error, "not a zetalab checkpoint: " + path);
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    CheckpointRecord r = parse_record(line);
    if (r.k != k) continue;
    if (r.digest != digest)
      throw Error(ErrorKind::validation_error, "checkpoint was written with a different configuration");
    if (!cp.grid.empty()) {
      const auto& prev = cp.grid.back();
      if (!(r.T > prev.T)) throw Error(ErrorKind::validation_error, "checkpoint T values must increase");
      if (r.value < prev.value) throw Error(ErrorKind::validation_error, "checkpoint values must not decrease");
    }
    cp.grid.push_back(std::move(r));
  }
  return cp;
}

void append_records(const std::string& path, const std::vector<CheckpointRecord>& records) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw Error(ErrorKind::io_error, "cannot open checkpoint " + path + ": " + std::strerror(errno));
  if (::flock(fd, LOCK_EX) != 0) {
    ::close(fd);
    throw Error(ErrorKind::io_error, "cannot lock checkpoint " + path);
  }
  std::string out;
  if (::lseek(fd, 0, SEEK_END) == 0) out = std::string(kCheckpointHeader) + "\n";
  for (const auto& r : records) out += format_record(r) + "\n";
  const char* p = out.data();
  std::size_t left = out.size();
  bool ok = true;
  while (left > 0) {
    const ssize_t n = ::write(fd, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      ok = false;
      break;
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  ok = ok && ::fsync(fd) == 0;
  ::flock(fd, LOCK_UN);
  ::close(fd);
  if (!ok) throw Error(ErrorKind::io_error, "write to checkpoint " + path + " failed");
}

MomentCheckpoint run_checkpointed(int k, double T_end, const PrecisionContext& ctx, const QuadConfig& cfg,
                                  const std::string& path, const ZSource& source,
                                  const std::function<void(const CheckpointRecord&)>& on_record) {
  if (k != 1 && k != 2 && k != 6) throw Error(ErrorKind::invalid_argument, "k must be 1, 2 or 6");
  if (!(T_end > 0)) throw Error(ErrorKind::invalid_range, "checkpoint end must be positive");
  const std::string digest = config_digest(k, ctx, cfg);
  MomentCheckpoint cp = read_checkpoint(path, k, digest);
  const double S = cfg.segment;
  const long m_end = static_cast<long>(std::ceil(T_end / S - 1e-12));
  long m = 0;
  double value = 0.0, err = 0.0;
  if (!cp.grid.empty()) {
    const auto& last = cp.grid.back();
    m = std::lround(last.T / S);
    if (static_cast<double>(m) * S != last.T)
      throw Error(ErrorKind::validation_error, "checkpoint grid is not on multiples of the segment length");
    value = last.value;
    err = last.err;
  }
  const ZSource src = source ? source : default_source(ctx, cfg);
  while (m < m_end) {
    const long m_next = std::min(m_end, m + kChunkSegments);
    const double a = static_cast<double>(m) * S, b = static_cast<double>(m_next) * S;
    const auto prof = MomentProfile::build(a, b, {2 * k}, src, cfg);
    std::vector<CheckpointRecord> batch;
    for (long j = m; j < m_next; ++j) {
      const double lo = static_cast<double>(j) * S, hi = static_cast<double>(j + 1) * S;
      const auto seg = prof.integral(2 * k, lo, hi);
      value += seg.value;
      err += seg.err_bound;
      batch.push_back({k, hi, value, err, digest});
    }
    append_records(path, batch);
    for (auto& r : batch) {
      if (on_record) on_record(r);
      cp.grid.push_back(std::move(r));
    }
    m = m_next;
  }
  return cp;
}

}  // namespace zetalab::moment
