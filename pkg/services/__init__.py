# services package: file access around the engine
