// Copyright 2026 The ulearn Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ulearn/learners.hpp"

#include <algorithm>
#include <map>

#include "ulearn/errors.hpp"
#include "ulearn/online.hpp"

namespace ulearn {

// ------------------------------------------------------------- classifiers

namespace {

class LabelsImpl final : public Classifier::Impl {
 public:
  explicit LabelsImpl(std::vector<Label> labels) : labels_(std::move(labels)) {}
  Label At(Point x) const override { return labels_[x]; }

 private:
  std::vector<Label> labels_;
};

class MajorityImpl final : public Classifier::Impl {
 public:
  explicit MajorityImpl(std::vector<Classifier> voters) : voters_(std::move(voters)) {}
  Label At(Point x) const override {
    std::size_t ones = 0;
    for (const Classifier& c : voters_) ones += c(x);
    return 2 * ones > voters_.size() ? 1 : 0;
  }

 private:
  std::vector<Classifier> voters_;
};

class OnlineImpl final : public Classifier::Impl {
 public:
  explicit OnlineImpl(OnlineLearner learner) : learner_(std::move(learner)) {}
  Label At(Point x) const override { return learner_.predict(x); }

 private:
  OnlineLearner learner_;
};

class OneInclusionImpl final : public Classifier::Impl {
 public:
  explicit OneInclusionImpl(std::shared_ptr<const OneInclusionPredictor> p) : p_(std::move(p)) {}
  Label At(Point x) const override { return p_->predict(x); }

 private:
  std::shared_ptr<const OneInclusionPredictor> p_;
};

}  // namespace

Classifier::Classifier(std::size_t domain_size, std::shared_ptr<const Impl> impl)
    : domain_size_(domain_size), impl_(std::move(impl)) {
  if (!impl_) throw UsageError("classifier needs an implementation");
}

Classifier Classifier::Constant(std::size_t domain_size, Label y) {
  return FromLabels(std::vector<Label>(domain_size, y));
}

Classifier Classifier::FromLabels(std::vector<Label> labels) {
  const std::size_t n = labels.size();
  return Classifier(n, std::make_shared<LabelsImpl>(std::move(labels)));
}

Classifier Classifier::FromBits(const BitVector& bits) {
  std::vector<Label> labels(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) labels[i] = bits.test(i) ? 1 : 0;
  return FromLabels(std::move(labels));
}

Classifier Classifier::Majority(std::vector<Classifier> voters) {
  if (voters.empty()) throw UsageError("majority vote needs at least one voter");
  const std::size_t n = voters.front().domain_size();
  for (const Classifier& c : voters) {
    if (c.domain_size() != n) throw DomainError("voters over different domains");
  }
  return Classifier(n, std::make_shared<MajorityImpl>(std::move(voters)));
}

Label Classifier::operator()(Point x) const {
  if (x >= domain_size_) throw DomainError("classifier queried outside its domain");
  return impl_->At(x);
}

std::vector<Label> Classifier::labels() const {
  std::vector<Label> out(domain_size_);
  for (Point x = 0; x < domain_size_; ++x) out[x] = impl_->At(x);
  return out;
}

// --------------------------------------------------------------------- ERM

Classifier erm_learner(const ConceptClass& cls, std::span<const LabeledPoint> sample) {
  const BitVector members = cls.consistent(sample);
  const std::size_t h = members.find_first();
  if (h == BitVector::npos) throw RealizabilityError("no hypothesis is consistent with the sample");
  return Classifier::FromBits(cls.row(h));
}

Classifier erm_learner(const Generator& gen, std::span<const LabeledPoint> sample) {
  auto row = gen.first_consistent(sample);
  if (!row) throw RealizabilityError("no hypothesis is consistent with the sample");
  return Classifier::FromBits(*row);
}

Classifier adversarial_erm(const ErmFailureClass& cls, std::span<const LabeledPoint> sample) {
  const bool all_zero = std::all_of(sample.begin(), sample.end(), [](const LabeledPoint& p) { return p.label == 0; });
  if (!all_zero) return erm_learner(cls, sample);
  for (const LabeledPoint& p : sample) cls.domain().check(p.point);
  for (std::size_t b = 0; b < cls.block_count(); ++b) {
    const std::size_t size = cls.block_size(b);
    BitVector sampled(size);
    for (const LabeledPoint& p : sample) {
      if (p.point >= cls.block_start(b) && p.point < cls.block_start(b) + size) sampled.set(p.point - cls.block_start(b));
    }
    if (sampled.count() > size / 2) continue;
    std::vector<Point> chosen;
    for (std::size_t i = 0; i < size && chosen.size() < size / 2; ++i) {
      if (!sampled.test(i)) chosen.push_back(cls.block_start(b) + static_cast<Point>(i));
    }
    return Classifier::FromBits(cls.indicator(chosen));
  }
  return erm_learner(cls, sample);
}

// ----------------------------------------------------------- online batch

Classifier online_as_batch(std::shared_ptr<const GameSolver> solver, std::span<const LabeledPoint> sample) {
  OnlineLearner learner(solver);
  for (const LabeledPoint& p : sample) learner.observe(p.point, p.label);
  const std::size_t n = solver->concept_class().domain().size();
  return Classifier(n, std::make_shared<OnlineImpl>(std::move(learner)));
}

// ------------------------------------------------------- exponential rate

Classifier exp_learner(std::shared_ptr<const GameSolver> solver, std::span<const LabeledPoint> sample,
                       LearnerTrace* trace) {
  LearnerTrace local;
  LearnerTrace& tr = trace ? *trace : local;
  tr = {};
  const std::size_t n = sample.size();
  const std::size_t domain = solver->concept_class().domain().size();
  const std::size_t eval_begin = split::exp_eval_begin(n);
  for (std::size_t t = 1; t <= split::exp_max_t(n); ++t) {
    const std::size_t batches = split::exp_batches(n, t);
    std::vector<OnlineLearner> learners;
    learners.reserve(batches);
    std::size_t failures = 0;
    for (std::size_t i = 0; i < batches; ++i) {
      OnlineLearner learner(solver);
      for (std::size_t j = i * t; j < (i + 1) * t; ++j) learner.observe(sample[j].point, sample[j].label);
      for (std::size_t s = eval_begin; s < n; ++s) {
        if (learner.predict(sample[s].point) != sample[s].label) {
          ++failures;
          break;
        }
      }
      learners.push_back(std::move(learner));
    }
    tr.failures.emplace_back(failures, batches);
    if (split::below_quarter(failures, batches)) {
      tr.t_hat = t;
      tr.voters = batches;
      std::vector<Classifier> voters;
      for (OnlineLearner& l : learners) voters.emplace_back(domain, std::make_shared<OnlineImpl>(std::move(l)));
      return Classifier::Majority(std::move(voters));
    }
  }
  tr.erm_fallback = true;
  return erm_learner(solver->concept_class(), sample);
}

// ------------------------------------------------------------ linear rate

Classifier lin_learner(std::shared_ptr<const GameSolver> solver, std::span<const LabeledPoint> sample,
                       LearnerTrace* trace) {
  LearnerTrace local;
  LearnerTrace& tr = trace ? *trace : local;
  tr = {};
  const std::size_t n = sample.size();
  const std::size_t domain = solver->concept_class().domain().size();
  for (std::size_t t = 1; t <= split::lin_max_t(n); ++t) {
    const std::size_t batches = split::lin_batches(n, t);
    std::vector<PatternAvoider> avoiders;
    avoiders.reserve(batches);
    std::size_t failures = 0;
    for (std::size_t i = 0; i < batches; ++i) {
      PatternAvoider av(solver);
      for (std::size_t j = i * t; j < (i + 1) * t; ++j) av.observe(sample[j].point, sample[j].label);
      const std::size_t tau = av.arity();
      const long last = split::lin_window_last(n, tau);
      for (long s = static_cast<long>(split::lin_window_first(n)); s <= last; ++s) {
        std::vector<Point> z(tau);
        BitVector y(tau);
        for (std::size_t k = 0; k < tau; ++k) {
          z[k] = sample[static_cast<std::size_t>(s) + k].point;
          y.set(k, sample[static_cast<std::size_t>(s) + k].label != 0);
        }
        if (av.forbidden(z) == y) {
          ++failures;
          break;
        }
      }
      avoiders.push_back(std::move(av));
    }
    tr.failures.emplace_back(failures, batches);
    if (!split::below_quarter(failures, batches)) continue;
    tr.t_hat = t;
    const std::size_t tail_begin = split::lin_tail_begin(n);
    const std::vector<LabeledPoint> tail(sample.begin() + static_cast<std::ptrdiff_t>(tail_begin), sample.end());
    std::vector<Classifier> voters;
    for (const PatternAvoider& av : avoiders) {
      if (av.arity() > tail.size()) {
        ++tr.excluded;
        continue;
      }
      auto predictor = std::make_shared<const OneInclusionPredictor>(av.as_function(), tail);
      voters.emplace_back(domain, std::make_shared<OneInclusionImpl>(std::move(predictor)));
    }
    tr.voters = voters.size();
    if (voters.empty()) break;
    return Classifier::Majority(std::move(voters));
  }
  tr.erm_fallback = true;
  return erm_learner(solver->concept_class(), sample);
}

}  // namespace ulearn
