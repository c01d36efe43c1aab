"""主入口文件"""
import sys

from src.core.main import main

if __name__ == "__main__":
    sys.exit(main())
