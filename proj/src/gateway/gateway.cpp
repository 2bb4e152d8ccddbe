#include "halprobe/gateway/gateway.hpp"

#include <condition_variable>
#include <thread>

#include "halprobe/errors.hpp"
#include "halprobe/util/hash.hpp"

namespace halprobe::gateway {

namespace detail {

class Semaphore {
 public:
  explicit Semaphore(std::size_t slots) : slots_(slots == 0 ? 1 : slots) {}

  void acquire() {
    std::unique_lock<std::mutex> lock(mutex_);
    cv_.wait(lock, [this] { return slots_ > 0; });
    --slots_;
  }

  void release() {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      ++slots_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::size_t slots_;
};

}  // namespace detail

namespace {

struct SlotGuard {
  explicit SlotGuard(detail::Semaphore& sem) : sem_(sem) { sem_.acquire(); }
  ~SlotGuard() { sem_.release(); }
  detail::Semaphore& sem_;
};

}  // namespace

ModelGateway::ModelGateway(ModelEndpointConfig config, std::shared_ptr<ModelTransport> transport,
                           ResponseCache* cache, std::size_t max_in_flight, SleepFn sleep)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      cache_(cache),
      sleep_(sleep ? std::move(sleep)
                   : [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }),
      in_flight_(std::make_shared<detail::Semaphore>(max_in_flight)) {
  config_.validate();
  if (!transport_) throw ConfigError("gateway requires a transport");
}

std::string ModelGateway::cache_key(const ModelEndpointConfig& config,
                                    const nlohmann::ordered_json& payload) {
  return util::sha256_hex(config.endpoint_id() + "\n" + payload.dump());
}

std::string ModelGateway::complete(const ChatRequest& request) {
  request.validate();
  return run_with_retries(request.canonical_payload(config_.model_id));
}

std::string ModelGateway::complete_binary(const std::string& image, const std::string& question) {
  if (question.empty() || question.back() != '?') {
    throw PreconditionError("binary probe question must end with '?': " + question);
  }
  ChatRequest request;
  request.image = image;
  request.turns = {{"user", question}};
  request.sampling.temperature = 0.0;
  request.sampling.top_p = 1.0;
  request.sampling.max_tokens = 16;
  request.sampling.seed.reset();
  request.validate();
  return run_with_retries(request.canonical_payload(config_.model_id));
}

std::string ModelGateway::run_with_retries(const nlohmann::ordered_json& payload) {
  const std::string key = cache_key(config_, payload);
  if (cache_) {
    if (auto hit = cache_->lookup(key)) {
      std::lock_guard<std::mutex> lock(stats_mutex_);
      ++stats_.cache_hits;
      return *hit;
    }
  }

  int attempt = 0;
  for (;;) {
    try {
      std::string response;
      {
        SlotGuard guard(*in_flight_);
        {
          std::lock_guard<std::mutex> lock(stats_mutex_);
          ++stats_.requests_sent;
        }
        response = transport_->send(payload);
      }
      if (cache_) cache_->store(key, payload.dump(), response);
      return response;
    } catch (const RateLimitedError&) {
      if (attempt >= config_.max_retries) throw;
    } catch (const UnreachableError&) {
      if (attempt >= config_.max_retries) throw;
    }
    // Exponential backoff; delays are monotonically non-decreasing.
    const auto delay = config_.backoff_base * (1LL << attempt);
    {
      std::lock_guard<std::mutex> lock(stats_mutex_);
      ++stats_.retries;
    }
    sleep_(std::chrono::duration_cast<std::chrono::milliseconds>(delay));
    ++attempt;
  }
}

GatewayStats ModelGateway::stats() const {
  std::lock_guard<std::mutex> lock(stats_mutex_);
  return stats_;
}

}  // namespace halprobe::gateway
