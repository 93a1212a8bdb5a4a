import json
import logging
import pathlib

import dotenv
from fastapi import APIRouter, FastAPI

dotenv.load_dotenv()

from app.env import configure_logging, mode  # noqa: E402

logger = logging.getLogger("main")

ROUTER_CONFIG = pathlib.Path(__file__).parent / "routers.json"


def get_router_config() -> dict:
    try:
        return json.loads(ROUTER_CONFIG.read_text())
    except (OSError, json.JSONDecodeError) as e:
        logger.warning("Cannot read %s (%s); enabling every router", ROUTER_CONFIG, e)
        return {"routers": {}}


def is_enabled(router_config: dict, name: str) -> bool:
    return router_config.get("routers", {}).get(name, {}).get("enabled", True)


def import_api_routers() -> APIRouter:
    routes = APIRouter(prefix="/routes")
    router_config = get_router_config()

    apis_path = pathlib.Path(__file__).parent / "app" / "apis"
    api_names = sorted(p.parent.name for p in apis_path.glob("*/__init__.py"))
    api_module_prefix = "app.apis."

    for name in api_names:
        if not is_enabled(router_config, name):
            logger.info("Skipping disabled API: %s", name)
            continue
        logger.info("Importing API: %s", name)
        try:
            api_module = __import__(api_module_prefix + name, fromlist=["router"])
        except ImportError as e:
            logger.error("Failed to import router for %s: %s", name, e)
            continue
        api_router = getattr(api_module, "router", None)
        if isinstance(api_router, APIRouter):
            routes.include_router(api_router)

    return routes


def create_app() -> FastAPI:
    configure_logging()
    app = FastAPI(title="Hybrid racing controller")
    app.include_router(import_api_routers())

    for route in app.routes:
        if hasattr(route, "methods"):
            for method in route.methods:
                logger.info("%s %s", method, route.path)
    logger.info("Running in %s mode", mode.value)
    return app


app = create_app()


@app.get("/")
def read_root():
    return {"message": "Hybrid racing controller API is live"}
