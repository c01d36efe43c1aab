# 测试配置文件