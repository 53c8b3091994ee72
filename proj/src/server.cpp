#include "kitesim/server.hpp"

#include <deque>
#include <mutex>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "kitesim/error.hpp"
#include "kitesim/telemetry.hpp"

namespace kitesim {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

struct TelemetryServer::Impl {
  class Session;

  asio::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::thread thread;
  std::size_t capacity;
  unsigned short port = 0;
  std::shared_ptr<Session> session;  // touched on the network thread only

  std::mutex command_mutex;
  std::vector<OperatorCommand> commands;
  std::atomic<bool> connected{false};
  std::atomic<std::size_t> dropped{0};
  std::atomic<std::size_t> rejected{0};
  std::atomic<std::size_t> sent{0};

  void accept();
  void on_closed(const Session* s) {
    if (session.get() == s) {
      session.reset();
      connected = false;
    }
  }
};

class TelemetryServer::Impl::Session : public std::enable_shared_from_this<Session> {
 public:
  Session(Impl& owner, tcp::socket socket) : owner_(owner), ws_(std::move(socket)) {}

  void start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return self->close();
      self->owner_.connected = true;
      self->read();
    });
  }

  void enqueue(std::string frame) {
    if (pending_.size() >= owner_.capacity) {
      pending_.pop_front();
      ++owner_.dropped;
    }
    pending_.push_back(std::move(frame));
    if (!writing_) write();
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->close();
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      try {
        OperatorCommand c = decode_command(text);
        std::lock_guard lock(self->owner_.command_mutex);
        self->owner_.commands.push_back(c);
      } catch (const Error& e) {
        ++self->owner_.rejected;
        self->enqueue(encode_error(e.what()));
      }
      self->read();
    });
  }

  void write() {
    writing_ = true;
    inflight_ = std::move(pending_.front());
    pending_.pop_front();
    ws_.text(true);
    ws_.async_write(asio::buffer(inflight_),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) return self->close();
                      ++self->owner_.sent;
                      self->writing_ = false;
                      if (!self->pending_.empty()) self->write();
                    });
  }

  void close() {
    if (closed_) return;
    closed_ = true;
    beast::error_code ec;
    beast::get_lowest_layer(ws_).close(ec);
    owner_.on_closed(this);
  }

  Impl& owner_;
  websocket::stream<tcp::socket> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> pending_;
  std::string inflight_;
  bool writing_ = false;
  bool closed_ = false;
};

void TelemetryServer::Impl::accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;
    if (session) {
      beast::error_code ignored;
      socket.close(ignored);  // one client at a time
    } else {
      session = std::make_shared<Session>(*this, std::move(socket));
      session->start();
    }
    accept();
  });
}

TelemetryServer::TelemetryServer(unsigned short port, std::size_t queue_capacity,
                                 bool any_address)
    : impl_(std::make_unique<Impl>()) {
  impl_->capacity = std::max<std::size_t>(queue_capacity, 1);
  const auto address = any_address ? asio::ip::address_v4::any() : asio::ip::address_v4::loopback();
  const tcp::endpoint endpoint(address, port);
  try {
    impl_->acceptor.open(endpoint.protocol());
    impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
    impl_->acceptor.bind(endpoint);
    impl_->acceptor.listen();
    impl_->port = impl_->acceptor.local_endpoint().port();
  } catch (const boost::system::system_error& e) {
    throw Error(ErrorKind::Io, "telemetry server: cannot listen on port " + std::to_string(port) +
                                   ": " + e.what());
  }
  impl_->accept();
  impl_->thread = std::thread([impl = impl_.get()] { impl->ioc.run(); });
}

TelemetryServer::~TelemetryServer() {
  impl_->ioc.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

unsigned short TelemetryServer::port() const { return impl_->port; }

void TelemetryServer::publish(std::string frame) {
  if (!impl_->connected) return;
  asio::post(impl_->ioc, [impl = impl_.get(), f = std::move(frame)]() mutable {
    if (impl->session) impl->session->enqueue(std::move(f));
  });
}

std::vector<OperatorCommand> TelemetryServer::take_commands() {
  std::lock_guard lock(impl_->command_mutex);
  std::vector<OperatorCommand> out;
  out.swap(impl_->commands);
  return out;
}

bool TelemetryServer::client_connected() const { return impl_->connected; }
std::size_t TelemetryServer::dropped_frames() const { return impl_->dropped; }
std::size_t TelemetryServer::rejected_commands() const { return impl_->rejected; }
std::size_t TelemetryServer::sent_frames() const { return impl_->sent; }

}  // namespace kitesim
