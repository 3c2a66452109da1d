#pragma once

#include <filesystem>
#include <iosfwd>

#include "auxnet/model.hpp"

namespace auxnet {

// Knowledge-base checkpoints as self-describing JSON. The document holds the
// network configuration, every layer's W, c, theta, alpha and optimizer
// moments, so a run restored from a snapshot continues bit-identically.
// The schema is documented in docs/snapshot_format.md.
void write_snapshot(std::ostream& out, const KnowledgeBase& kb);
KnowledgeBase read_snapshot(std::istream& in);

void save_snapshot(const std::filesystem::path& path, const KnowledgeBase& kb);
KnowledgeBase load_snapshot(const std::filesystem::path& path);

}  // namespace auxnet
