#pragma once

#include <map>
#include <optional>
#include <vector>

#include "gcd/types.hpp"

namespace gcd {

/// Interns terminal sequences; ids are assigned in first-seen order.
class SequencePool {
 public:
  SeqId intern(const TerminalSeq& seq) {
    auto [it, fresh] = index_.emplace(seq, static_cast<SeqId>(seqs_.size()));
    if (fresh) seqs_.push_back(seq);
    return it->second;
  }
  const TerminalSeq& get(SeqId id) const { return seqs_.at(static_cast<std::size_t>(id)); }
  std::optional<SeqId> find(const TerminalSeq& seq) const {
    auto it = index_.find(seq);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t size() const { return seqs_.size(); }
  const std::vector<TerminalSeq>& all() const { return seqs_; }

  bool operator==(const SequencePool& o) const { return seqs_ == o.seqs_; }

 private:
  std::vector<TerminalSeq> seqs_;
  std::map<TerminalSeq, SeqId> index_;
};

}  // namespace gcd
