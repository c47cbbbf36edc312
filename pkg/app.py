from flask import Flask, jsonify

from cli import run_command, sweep_command
from config import configure_logging, settings
from vanishing_api import vanishing_bp


def create_app():
    app = Flask(__name__)
    app.secret_key = settings.secret_key
    configure_logging()

    app.register_blueprint(vanishing_bp)

    # `flask run-instance` / `flask sweep` mirror the standalone CLI
    app.cli.add_command(run_command, "run-instance")
    app.cli.add_command(sweep_command, "sweep")

    @app.route("/")
    def index():
        return jsonify({"success": True, "service": "locoh", "endpoints": ["/api/decide", "/api/sweep"]})

    return app


app = create_app()


# === Run App ===
if __name__ == "__main__":
    app.run(debug=True)
